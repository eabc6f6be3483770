from sentact.caption.features import FeatureStack, read_feature_stack, write_feature_stack
from sentact.caption.vocab import Vocabulary, PAD, BOS, EOS, UNK
from sentact.caption.layers import (
    MultiHeadAttention,
    positional_encoding,
    record_attention,
    scaled_dot_product_attention,
)
from sentact.caption.transformer import ModelParams, TransformerCaptioner
from sentact.caption.bmt import BimodalCaptioner
from sentact.caption.decode import generate_caption
from sentact.caption.bleu import bleu
from sentact.caption.train import (
    CaptionExample,
    TrainedCaptioner,
    TrainingSchedule,
    train_captioner,
)

__all__ = [
    "FeatureStack",
    "read_feature_stack",
    "write_feature_stack",
    "Vocabulary",
    "PAD",
    "BOS",
    "EOS",
    "UNK",
    "positional_encoding",
    "scaled_dot_product_attention",
    "MultiHeadAttention",
    "record_attention",
    "ModelParams",
    "TransformerCaptioner",
    "BimodalCaptioner",
    "generate_caption",
    "bleu",
    "CaptionExample",
    "TrainingSchedule",
    "TrainedCaptioner",
    "train_captioner",
]
