from acwi.nn.functional import cross_entropy, one_hot, zscore, zscore_t
from acwi.nn.mlp import Mlp, MlpSpec, mlp_forward
from acwi.nn.optim import OptimState, clip_grad_norm, global_grad_norm, optimizer_step
from acwi.nn.params import ParamSet, load_arrays, load_params, save_arrays, save_params
from acwi.nn.tensor import Tensor

__all__ = [
    "Mlp",
    "MlpSpec",
    "OptimState",
    "ParamSet",
    "Tensor",
    "clip_grad_norm",
    "cross_entropy",
    "global_grad_norm",
    "load_arrays",
    "load_params",
    "mlp_forward",
    "one_hot",
    "optimizer_step",
    "save_arrays",
    "save_params",
    "zscore",
    "zscore_t",
]
