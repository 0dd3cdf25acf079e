"""Trial records, seed derivation and the CSV format."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

COLUMNS = ("trial", "seed", "outcome", "list_size", "dimension", "work", "ms", "digest")


def derive_seed(master, name, index) -> int:
    """64-bit seed from (master seed, experiment name, trial index)."""
    h = hashlib.sha256(f"{int(master)}:{name}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def trial_rng(seed):
    return np.random.default_rng(seed)


def digest(*parts) -> int:
    """64-bit fingerprint of the sampled objects of a trial."""
    h = hashlib.sha256()
    for part in parts:
        a = np.asarray(part, dtype=np.int64).ravel()
        h.update(str(a.size).encode())
        h.update(a.astype("<i8").tobytes())
    return int.from_bytes(h.digest()[:8], "big")


@dataclass
class TrialRecord:
    trial: int
    seed: int
    outcome: int
    list_size: int
    dimension: int = -1
    work: int = 0
    ms: int = 0
    digest: int = 0
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    def row(self, timing=True) -> str:
        vals = [getattr(self, c) for c in COLUMNS]
        if not timing:
            vals[COLUMNS.index("ms")] = 0
        return ",".join(str(int(v)) for v in vals)

    def key(self):
        """Everything a replay must reproduce (wall time excluded)."""
        return tuple(getattr(self, c) for c in COLUMNS if c != "ms")


def write_csv(path, records, timing=False):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        for r in records:
            fh.write(r.row(timing) + "\n")


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != COLUMNS:
            raise ValueError(f"{path}: unexpected CSV header {header}")
        out = []
        for line in fh:
            if line.strip():
                vals = [int(v) for v in line.strip().split(",")]
                out.append(TrialRecord(**dict(zip(COLUMNS, vals))))
    return out
