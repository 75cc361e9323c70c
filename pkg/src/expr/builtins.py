"""Named fields used throughout the test suites and the CLI."""
from src.errors import UnknownBuiltinError
from src.expr.field import ScalarField

# (expression, dimension, description)
BUILTINS = {
    'fig1_invex': (
        "sigmoid(x0)*(x1^2-1)^2", 2,
        "invex field whose minima R x {-1, 1} are disconnected"),
    'fig3_twosided_pl': (
        "max(abs(x0)-1,0)^2"
        " + 3*sin(max(abs(x1)-1,0))^2*sin(max(abs(x0)-1,0))^2"
        " - 4*max(abs(x1)-1,0)^2 - 10*sin(max(abs(x1)-1,0))^2", 2,
        "two-sided PL minimax field with saddle set [-1,1]^2"),
    'fig4_u1': (
        "-0.5*x0^2 + x0*x1", 2,
        "player 1 utility of the three-equilibrium game"),
    # The printed caption reads -a2^2/2 + (a1^3 - 2a1); its stated
    # equilibria (0,0), (+-sqrt3, +-sqrt3) need the response a1^3 - 2a1.
    'fig4_u2': (
        "-0.5*x1^2 + x1*(x0^3 - 2*x0)", 2,
        "player 2 utility, best response a1^3 - 2 a1"),
    'appB_exp': (
        "max(abs(x0)-1,0)^2*exp(-max(abs(x1)-1,0)^2)"
        " - max(abs(x1)-1,0)^2", 2,
        "locally PL minimax field with saddle set [-1,1]^2"),
    'doublewell': ("(x0^2-1)^2 + x1^2", 2, "two wells at (+-1, 0)"),
    'quadratic': ("x0^2 + x1^2", 2, "convex bowl"),
}


def builtin(name: str) -> ScalarField:
    try:
        text, dimension, _ = BUILTINS[name]
    except KeyError:
        available = ", ".join(sorted(BUILTINS))
        raise UnknownBuiltinError(
            f"unknown builtin '{name}'; available: {available}") from None
    return ScalarField.from_text(text, dimension, name=name)
