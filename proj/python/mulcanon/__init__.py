"""Open-KB canonicalization via diffusion-based soft clustering, with
machine unlearning that erases a forget set by re-noising embeddings."""

from ._mulcanon import *  # noqa: F401,F403
from ._mulcanon import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
