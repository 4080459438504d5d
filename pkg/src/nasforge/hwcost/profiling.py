"""Profiling tables: per-primitive cost measurements keyed by canonical strings.

``PrimitiveKey`` is the blockwise space's BlockConfig; its ``key()`` string
(op, input shape, output channels, kernel, stride, expansion) identifies a
table row.  CSV format: header ``primitive_key,cost``.
"""

import csv
from dataclasses import dataclass, field

from ..errors import NasforgeError
from ..spaces.blockwise import BlockConfig

PrimitiveKey = BlockConfig


@dataclass
class ProfilingTable:
    device_name: str
    metric: str
    entries: dict = field(default_factory=dict)  # key string -> cost

    def add(self, key, cost):
        if key in self.entries:
            raise NasforgeError(f"duplicate profiling key {key!r}")
        if not cost > 0:
            raise NasforgeError(f"profiled cost must be positive, got {cost!r} for {key!r}")
        self.entries[key] = float(cost)

    def __len__(self):
        return len(self.entries)

    def save_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["primitive_key", "cost"])
            for key in sorted(self.entries):
                writer.writerow([key, repr(self.entries[key])])

    @classmethod
    def load_csv(cls, path, device_name="unknown", metric="latency_ms"):
        table = cls(device_name, metric)
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                if header != ["primitive_key", "cost"]:
                    raise NasforgeError(
                        f"{path}: expected header 'primitive_key,cost', got {header}"
                    )
                for row in reader:
                    if len(row) != 2:
                        raise NasforgeError(f"{path}: malformed row {row}")
                    table.add(row[0], float(row[1]))
        except OSError as exc:
            raise NasforgeError(f"cannot read profiling table {path}: {exc}") from exc
        return table


def profile_primitives(space, device):
    """Measure every reachable primitive of a blockwise space on a device."""
    if not hasattr(space, "reachable_blocks"):
        raise NasforgeError(
            f"space {space.name!r} has no profilable primitives (blockwise required)"
        )
    table = ProfilingTable(device_name=device.name, metric=device.metric)
    for block in space.reachable_blocks():
        table.add(block.key(), device.primitive_cost(block))
    return table
