import pytest
from flask import Flask
from flask.testing import FlaskClient

from perimeter_app.app import create_app


@pytest.fixture()
def app() -> Flask:
    app = create_app()
    app.config.update({
        "TESTING": True,
    })
    return app


@pytest.fixture()
def client(app: Flask) -> FlaskClient:
    return app.test_client()


class TestApp:

    def test_health(self, client) -> None:
        response = client.get("/health")
        assert response.status_code == 200
        assert response.data == b"OK"

    def test_g1_table(self, client) -> None:
        response = client.get("/tables/g1/4")
        assert response.status_code == 200
        document = response.get_json()
        assert document["rows"] == [[15, "8"], [16, "24"]]
        assert document["header"]["mode"] == "proper"

    def test_g2_small_n_comes_from_enumeration(self, client) -> None:
        response = client.get("/tables/g2/5")
        assert response.status_code == 200
        document = response.get_json()
        assert document["header"]["provenance"] == "enumeration"
        assert sum(int(c) for _, c in document["rows"]) == 348

    def test_dx(self, client) -> None:
        response = client.get("/tables/dx/5/4")
        assert response.status_code == 200
        assert response.get_json() == {"n": 5, "i": 4, "dx": "400"}

    def test_dx_invalid_dimension(self, client) -> None:
        response = client.get("/tables/dx/6/3")
        assert response.status_code == 400
        assert "error" in response.get_json()

    def test_enumeration_over_budget(self, client, monkeypatch) -> None:
        monkeypatch.setenv("PERIMETER_APP_ENUMERATION_BUDGET", "10")
        response = client.get("/tables/g2/5")
        assert response.status_code == 422
        document = response.get_json()
        assert document["budget"] == 10
        assert document["estimate"] > 10

    @pytest.mark.parametrize("path", ["/tables/g1/400", "/tables/g2/61", "/tables/dx/400/399"])
    def test_formula_routes_refuse_large_n(self, client, path) -> None:
        response = client.get(path)
        assert response.status_code == 400
        assert "PERIMETER_APP_FORMULA_N_LIMIT" in response.get_json()["error"]

    def test_formula_limit_from_environment(self, client, monkeypatch) -> None:
        monkeypatch.setenv("PERIMETER_APP_FORMULA_N_LIMIT", "3")
        assert client.get("/tables/g1/3").status_code == 200
        assert client.get("/tables/g1/4").status_code == 400
