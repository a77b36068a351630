from dotenv import load_dotenv
from flask import Flask, Response, jsonify

from perimeter_app.commands.table_commands import cmd_dx, cmd_g1, cmd_g2
from perimeter_app.lib.errors import BudgetExceededError, InvalidInputError, PerimeterAppError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.result_file import ResultFile
from perimeter_app.lib.settings import formula_n_limit

logger = get_logger()

# Load environment variables from .env file (for local deployment)
load_dotenv()


def _result_response(result: ResultFile) -> Response:
    return Response(result.dumps("json"), status=200, mimetype="application/json")


def _check_formula_n(n: int) -> None:
    limit = formula_n_limit()
    if n > limit:
        raise InvalidInputError(f"n={n} is above this service's limit of {limit} (PERIMETER_APP_FORMULA_N_LIMIT)")


def create_app() -> Flask:
    app = Flask("perimeter-app")

    @app.route("/health")
    def health_check() -> tuple[str, int]:
        """Health check endpoint"""
        return "OK", 200

    @app.route("/tables/g1/<int:n>")
    def g1_table(n: int) -> Response:
        _check_formula_n(n)
        return _result_response(cmd_g1(n))

    @app.route("/tables/g2/<int:n>")
    def g2_table(n: int) -> Response:
        _check_formula_n(n)
        # n < 6 is answered from enumeration, visible in the provenance field
        return _result_response(cmd_g2(n))

    @app.route("/tables/dx/<int:n>/<int:i>")
    def dx_value(n: int, i: int) -> Response:
        _check_formula_n(n)
        return jsonify({"n": n, "i": i, "dx": str(cmd_dx(n, i))})

    @app.errorhandler(BudgetExceededError)
    def budget_refused(e: BudgetExceededError) -> tuple[Response, int]:
        logger.warning("Refused request: %s", e)
        return jsonify({"error": str(e), "estimate": e.estimate, "budget": e.budget}), 422

    @app.errorhandler(InvalidInputError)
    def invalid_input(e: InvalidInputError) -> tuple[Response, int]:
        logger.debug("Exiting with client error: %s", e)
        return jsonify({"error": str(e)}), 400

    @app.errorhandler(PerimeterAppError)
    def formula_failure(e: PerimeterAppError) -> tuple[Response, int]:
        logger.error("Formula failure: %s", e)
        return jsonify({"error": str(e)}), 500

    return app


app = create_app()

if __name__ == "__main__":
    app.run(host="0.0.0.0", port=8080)
