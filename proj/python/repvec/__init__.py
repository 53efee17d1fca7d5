"""Representative vectors for ontology classes from instance word embeddings."""

from ._core import *  # noqa: F401,F403
from ._core import RepvecError, __doc__  # noqa: F401


def resolve_all(ontology, table):
    """Resolve every class of an ontology against an embedding table."""
    return [resolve_class(cls, table) for cls in ontology]  # noqa: F405
