try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:
    # in-tree test runs put the bare extension on PYTHONPATH
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
