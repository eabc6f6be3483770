from sentact.embed.vectors import EmbeddingVector, cosine_similarity
from sentact.embed.providers import (
    BagOfWordsProvider,
    TableProvider,
    load_external_provider,
    parse_provider,
    write_vector_table,
)

__all__ = [
    "EmbeddingVector",
    "cosine_similarity",
    "BagOfWordsProvider",
    "TableProvider",
    "load_external_provider",
    "parse_provider",
    "write_vector_table",
]
