from .layers import Dense, Embedding, LSTM, MultiHead
from .losses import loss_mse, loss_masked_cross_entropy, loss_bce
from .optim import SGD, RMSProp, make_optimizer
from .checkpoint import save_checkpoint, load_checkpoint, CheckpointMismatch

__all__ = [
    "Dense",
    "Embedding",
    "LSTM",
    "MultiHead",
    "loss_mse",
    "loss_masked_cross_entropy",
    "loss_bce",
    "SGD",
    "RMSProp",
    "make_optimizer",
    "save_checkpoint",
    "load_checkpoint",
    "CheckpointMismatch",
]
