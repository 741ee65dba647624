"""Long-time asymptotics of the defocusing NLS equation, numerically checked."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
