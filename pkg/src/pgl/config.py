import os

DEFAULT_TOL = 1e-9


def default_tol():
    """Global relative tolerance; ``PGL_TOL`` in the environment overrides it."""
    raw = os.environ.get("PGL_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    tol = float(raw)
    if not tol > 0:
        raise ValueError(f"PGL_TOL must be positive, got {raw!r}")
    return tol
