from .adam import AdamState, adam_step, init_adam
from .backward import backward_batch, model_backward
from .forward import (
    ForwardCache,
    Workspace,
    gaussian_corrupt,
    lstm_forward,
    model_forward,
    model_forward_batch,
    mse_loss,
)
from .gradcheck import finite_diff_grad, gradient_check
from .kernel import KernelScratch, predict_window, window_forward_fast
from .model import (
    CHANNEL_NAMES,
    GATE_ORDER,
    LSTM_UNITS,
    N_CHANNELS,
    DenseParams,
    Gradients,
    LstmParams,
    StanceModel,
    flatten_params,
    init_stance_model,
    unflatten_params,
)

__all__ = [
    "AdamState", "adam_step", "init_adam",
    "backward_batch", "model_backward",
    "ForwardCache", "Workspace", "gaussian_corrupt", "lstm_forward",
    "model_forward", "model_forward_batch", "mse_loss",
    "finite_diff_grad", "gradient_check",
    "KernelScratch", "predict_window", "window_forward_fast",
    "CHANNEL_NAMES", "GATE_ORDER", "LSTM_UNITS", "N_CHANNELS",
    "DenseParams", "Gradients", "LstmParams", "StanceModel",
    "flatten_params", "init_stance_model", "unflatten_params",
]
