from dataclasses import dataclass

DEFAULT_MODEL_ID = "facebook/bart-large-mnli"


@dataclass(frozen=True)
class ServerConfig:
    """Runtime configuration for the scoring server.

    `device` defaults to CPU for deterministic scores; GPU works but small
    numeric differences between devices are expected.
    """

    model_id: str = DEFAULT_MODEL_ID
    device: str = "cpu"
    max_batch: int = 64
    port: int = 8100

    def __post_init__(self) -> None:
        if self.max_batch < 1:
            raise ValueError("max_batch must be positive")
        if not 0 < self.port < 65536:
            raise ValueError(f"invalid port: {self.port}")
