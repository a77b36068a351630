# Process exit codes
EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_BUDGET_REFUSED = 3
EXIT_VERIFICATION_FAILED = 4

# Commands
CMD_G1 = "g1"
CMD_G2 = "g2"
CMD_DX = "dx"
CMD_ENUMERATE = "enumerate"
CMD_EXPAND = "expand"
CMD_INVERT = "invert"
CMD_SYMBOLIC = "symbolic"
CMD_DENSITY = "density"
CMD_VERIFY = "verify"
CMD_VERIFY_PATTERNS = "verify-patterns"
CMD_CALIBRATE = "calibrate"

# Verification check names
CHECK_GOLDEN = "golden-n4"
CHECK_G1_TOTAL = "g1-total"
CHECK_BIJECTION = "code-bijection"
CHECK_TREE_CENSUS = "tree-census"
CHECK_PATTERNS = "pattern-counts"
CHECK_G2 = "g2-vs-enumeration"
CHECK_PERIMETER_LAWS = "perimeter-laws"
CHECK_EXPANSION = "expand-invert"

# Largest lattice dimension the expansion check enumerates
EXPANSION_MAX_D = 5
