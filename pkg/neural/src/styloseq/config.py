"""Model and training configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class NeuralConfig:
    """Sizes, caps, and training knobs for the sequence model.

    The caps bound what one example may carry: max_io_len tokens per
    side, max_ast leaf paths of at most max_ast_depth node kinds, and
    max_dfg distinct data-flow endpoints.  Inputs over a cap are
    truncated and flagged, never dropped.
    """

    d: int = 48
    heads: int = 4
    layers: int = 2
    max_io_len: int = 1024
    max_ast: int = 1000
    max_dfg: int = 1000
    max_ast_depth: int = 32
    lr: float = 3e-3
    epochs: int = 200
    batch_size: int = 8
    seed: int = 0
    use_dfg_bias: bool = True

    def validate(self) -> None:
        for name in ("d", "heads", "layers", "max_io_len", "max_ast",
                     "max_dfg", "max_ast_depth", "epochs", "batch_size"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, "
                                 f"got {value!r}")
        if self.d % self.heads != 0:
            raise ValueError(f"d={self.d} is not divisible by "
                             f"heads={self.heads}")
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "NeuralConfig":
        config = NeuralConfig(**data)
        config.validate()
        return config
