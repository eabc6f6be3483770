from sentact.text.sentences import (
    RawDocument,
    Sentence,
    expand_contractions,
    filter_min_words,
    split_sentences,
)
from sentact.text.prototypes import (
    PrototypeSet,
    build_label_prototype,
    build_paragraph_prototype,
    load_documents,
    normalize_label,
    read_prototype_store,
    select_prototypes,
    write_prototype_store,
)

__all__ = [
    "RawDocument",
    "Sentence",
    "PrototypeSet",
    "split_sentences",
    "expand_contractions",
    "filter_min_words",
    "select_prototypes",
    "build_paragraph_prototype",
    "build_label_prototype",
    "normalize_label",
    "load_documents",
    "read_prototype_store",
    "write_prototype_store",
]
