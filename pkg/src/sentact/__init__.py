"""Sentence-based zero-shot action recognition.

Videos are represented by captioning-model sentences, action classes by
sentences distilled from description documents; both sides are embedded
into one space and classified with a nearest-prototype cosine rule.
"""

__version__ = "0.1.0"
