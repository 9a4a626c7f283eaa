"""Secret sharing of encrypted data that stays confidential when the key leaks."""

from kexshard.core import DeterministicRng
from kexshard.schemes import FragmentationPolicy, SchemeId, Share, make_scheme

__version__ = "0.1.0"

__all__ = ["DeterministicRng", "FragmentationPolicy", "SchemeId", "Share", "make_scheme", "__version__"]
