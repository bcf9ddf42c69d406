from app.model.models import Dataset, NetworkSpec, NoiseSpec
from app.model.network import empirical_loss, forward, heaviside, quantize
from app.model.data import draw_instance, synthesize_dataset

__all__ = [
    "Dataset",
    "NetworkSpec",
    "NoiseSpec",
    "draw_instance",
    "empirical_loss",
    "forward",
    "heaviside",
    "quantize",
    "synthesize_dataset",
]
