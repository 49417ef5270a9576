import csv
import math
import pathlib
from dataclasses import astuple, dataclass, fields, replace

import pandas as pd

from core.errors import IoError

HEADER = ["method", "N", "tau", "p", "schedule", "fit", "depth", "degree", "ideal", "noisy_mean",
          "estimate", "variance", "bias", "mse", "shots", "seed", "best"]


@dataclass(frozen=True)
class ResultRow:
    method: str
    N: int
    tau: float
    p: float
    schedule: str
    fit: str
    depth: int
    degree: int
    ideal: float
    noisy_mean: float
    estimate: float
    variance: float
    bias: float
    mse: float
    shots: int
    seed: int
    best: bool = False

    @property
    def failed(self) -> bool:
        return self.fit.startswith("failed:")

    def as_best(self) -> "ResultRow":
        return replace(self, best=True)

    def sort_key(self):
        return self.method, self.N, self.tau, self.p, self.schedule, self.fit, self.best


assert [f.name for f in fields(ResultRow)] == HEADER


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.17g}"
    return str(v)


def write_table(path, header, rows) -> pathlib.Path:
    """Header plus rows, floats at 17 significant digits, `\\n` line endings."""
    path = pathlib.Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def emit_csv(rows, path) -> pathlib.Path:
    ordered = sorted(rows, key=ResultRow.sort_key)
    return write_table(path, HEADER, (astuple(r) for r in ordered))


def read_results(path) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, float_precision="round_trip", keep_default_na=False, na_values=["nan"])
    except (OSError, pd.errors.ParserError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    df["best"] = df["best"].astype(str).str.lower() == "true"
    return df
