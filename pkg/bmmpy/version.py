from importlib import metadata

try:
    from ._version import version
except ImportError:
    # not built by setuptools_scm, e.g. a plain source checkout
    try:
        version = metadata.version("bmmpy")
    except metadata.PackageNotFoundError:
        version = "0.0.0"

__version__ = version
