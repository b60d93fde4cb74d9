"""Single record of numerical defaults and tolerances."""

import hashlib
import json
from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class RunConfig:
    grid_m: int = 256
    kernel_tol: float = 1e-7
    identity_tol: float = 1e-6
    dt: float = 1e-3
    seed: int = 0
    out_dir: str = "."

    def __post_init__(self):
        if self.grid_m < 64 or self.grid_m % 2:
            raise ValueError(f"grid_m must be even and >= 64, got {self.grid_m}")
        for name in ("kernel_tol", "identity_tol", "dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def with_(self, **changes):
        return replace(self, **changes)

    def digest(self):
        """Short stable hash of the numerical settings (out_dir excluded)."""
        payload = {k: v for k, v in asdict(self).items() if k != "out_dir"}
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


DEFAULTS = RunConfig()
