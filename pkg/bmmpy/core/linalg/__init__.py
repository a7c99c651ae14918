from bmmpy.core.linalg.basis import DEFAULT_RANK_TOL, OrthoBasis, least_squares

__all__ = ["DEFAULT_RANK_TOL", "OrthoBasis", "least_squares"]
