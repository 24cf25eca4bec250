import os
from typing import TYPE_CHECKING, Any, Callable, Optional

if TYPE_CHECKING:
    GAUSS_DFA_TOL_SYM: float = 1e-12
    GAUSS_DFA_TOL_RANK: float = 0.0
    GAUSS_DFA_SPAN_TOL: float = 1e-9
    GAUSS_DFA_SUBSPACE_TOL: float = 1e-8
    GAUSS_DFA_QUAD_TOL: float = 1e-10
    GAUSS_DFA_QUAD_LIMIT: int = 200
    GAUSS_DFA_ODE_TOL: float = 1e-9
    GAUSS_DFA_ODE_METHOD: str = "DOP853"
    GAUSS_DFA_OUTPUT_FORMAT: str = "text"
    GAUSS_DFA_SEED: int = 0
    GAUSS_DFA_CONFIGURE_LOGGING: bool = True
    GAUSS_DFA_LOGGING_LEVEL: str = "INFO"
    GAUSS_DFA_LOGGING_CONFIG_PATH: Optional[str] = None
    GAUSS_DFA_PERF_METRIC_LOGGING_ENABLED: int = 0
    GAUSS_DFA_PERF_METRIC_LOGGING_DIR: str = "/tmp"

_ODE_METHODS = ("RK23", "RK45", "DOP853")


def _ode_method() -> str:
    val = os.getenv("GAUSS_DFA_ODE_METHOD", "DOP853").upper()
    if val not in _ODE_METHODS:
        raise ValueError(f"GAUSS_DFA_ODE_METHOD must be one of {_ODE_METHODS}"
                         f", got {val!r}")
    return val


def _output_format() -> str:
    val = os.getenv("GAUSS_DFA_OUTPUT_FORMAT", "text").lower()
    if val not in ("text", "json"):
        raise ValueError("GAUSS_DFA_OUTPUT_FORMAT must be 'text' or 'json', "
                         f"got {val!r}")
    return val


# --8<-- [start:env-vars-definition]
environment_variables: dict[str, Callable[[], Any]] = {
    # Relative tolerance for the Hermiticity of Omega and the symmetry of
    # kappa, measured against the largest entry of the matrix.
    "GAUSS_DFA_TOL_SYM":
    lambda: float(os.getenv("GAUSS_DFA_TOL_SYM", "1e-12")),

    # Absolute rank tolerance for the minimality check. 0 selects the
    # automatic value max(m, 2d) * eps * sigma_max.
    "GAUSS_DFA_TOL_RANK":
    lambda: float(os.getenv("GAUSS_DFA_TOL_RANK", "0")),

    # Relative singular value cutoff used when taking real spans,
    # complements and intersections.
    "GAUSS_DFA_SPAN_TOL":
    lambda: float(os.getenv("GAUSS_DFA_SPAN_TOL", "1e-9")),

    # Largest principal angle (radians) at which two real subspaces are
    # still considered equal.
    "GAUSS_DFA_SUBSPACE_TOL":
    lambda: float(os.getenv("GAUSS_DFA_SUBSPACE_TOL", "1e-8")),

    # Relative tolerance and subdivision limit of the adaptive quadrature
    # computing the damping and phase of the Weyl evolution.
    "GAUSS_DFA_QUAD_TOL":
    lambda: float(os.getenv("GAUSS_DFA_QUAD_TOL", "1e-10")),
    "GAUSS_DFA_QUAD_LIMIT":
    lambda: int(os.getenv("GAUSS_DFA_QUAD_LIMIT", "200")),

    # Tolerance and method of the explicit Runge-Kutta integrator used by
    # the truncated Fock oracle. Available options: RK23, RK45, DOP853.
    "GAUSS_DFA_ODE_TOL":
    lambda: float(os.getenv("GAUSS_DFA_ODE_TOL", "1e-9")),
    "GAUSS_DFA_ODE_METHOD":
    _ode_method,

    # Output format of the command line reports: "text" or "json".
    "GAUSS_DFA_OUTPUT_FORMAT":
    _output_format,

    # Seed for randomized model generation.
    "GAUSS_DFA_SEED":
    lambda: int(os.getenv("GAUSS_DFA_SEED", "0")),

    # If set to 0, gaussian-dfa will not configure logging on import.
    "GAUSS_DFA_CONFIGURE_LOGGING":
    lambda: bool(int(os.getenv("GAUSS_DFA_CONFIGURE_LOGGING", "1"))),

    # Level of the package logger when the default configuration is used.
    "GAUSS_DFA_LOGGING_LEVEL":
    lambda: os.getenv("GAUSS_DFA_LOGGING_LEVEL", "INFO").upper(),

    # Path to a JSON file holding a logging.config.dictConfig replacing the
    # default configuration.
    "GAUSS_DFA_LOGGING_CONFIG_PATH":
    lambda: os.getenv("GAUSS_DFA_LOGGING_CONFIG_PATH"),

    # Enable performance metric logging. This captures the wall time of the
    # analysis stages. It is turned off by default.
    "GAUSS_DFA_PERF_METRIC_LOGGING_ENABLED":
    lambda: int(os.getenv("GAUSS_DFA_PERF_METRIC_LOGGING_ENABLED", "0")),

    # Directory to write performance metric logging files. By default,
    # logs are written to /tmp.
    "GAUSS_DFA_PERF_METRIC_LOGGING_DIR":
    lambda: os.getenv("GAUSS_DFA_PERF_METRIC_LOGGING_DIR", "/tmp"),
}
# --8<-- [end:env-vars-definition]


def __getattr__(name: str):
    # lazy evaluation of environment variables
    if name in environment_variables:
        return environment_variables[name]()
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return list(environment_variables.keys())
