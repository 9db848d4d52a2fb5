"""Quantitative comparison of a produced map against a reference map.

Maps are first rescaled to the signed range [-1, 1] (-1 completely empty,
+1 completely occupied, 0 unknown), cut into a ternary grid at a confidence
threshold alpha, and scored with a 3x3 confusion matrix, per-class precision,
recall and F2, their mean (the total combined rate), and the mean absolute
error of the continuous map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ScalarGrid

DEFAULT_ALPHA = 1.0 / 3.0
DEFAULT_SWEEP_ALPHAS = tuple(k / 31.0 for k in range(1, 31))


@dataclass(frozen=True)
class ConfusionMatrix3:
    """3x3 counts; rows = predicted, cols = actual, order obstacle/empty/unknown.

    Cell names follow the obstacle-true-obstacle scheme: the two-letter
    prefix is predicted-class + truth, e.g. ``efo`` counts cells predicted
    obstacle that are actually empty.
    """

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (3, 3):
            raise ValueError("confusion matrix must be 3x3")
        object.__setattr__(self, "counts", counts)

    @property
    def oto(self): return int(self.counts[0, 0])

    @property
    def efo(self): return int(self.counts[0, 1])

    @property
    def ufo(self): return int(self.counts[0, 2])

    @property
    def ofe(self): return int(self.counts[1, 0])

    @property
    def ete(self): return int(self.counts[1, 1])

    @property
    def ufe(self): return int(self.counts[1, 2])

    @property
    def ofu(self): return int(self.counts[2, 0])

    @property
    def efu(self): return int(self.counts[2, 1])

    @property
    def utu(self): return int(self.counts[2, 2])

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class PrecisionRecall:
    p_obstacle: float
    r_obstacle: float
    p_empty: float
    r_empty: float
    vacuous: frozenset[str]


@dataclass(frozen=True)
class EvalReport:
    """Scores of one (map, reference) pair at one alpha."""

    matrix: ConfusionMatrix3
    alpha: float
    p_obstacle: float
    r_obstacle: float
    f_obstacle: float
    p_empty: float
    r_empty: float
    f_empty: float
    tcr: float
    mae: float
    vacuous: frozenset[str]

    def to_text(self) -> str:
        """Flat key=value record (one key per line)."""
        m = self.matrix
        lines = [
            f"alpha={self.alpha:.6f}",
            f"oto={m.oto}", f"efo={m.efo}", f"ufo={m.ufo}",
            f"ofe={m.ofe}", f"ete={m.ete}", f"ufe={m.ufe}",
            f"ofu={m.ofu}", f"efu={m.efu}", f"utu={m.utu}",
            f"p_obstacle={self.p_obstacle:.6f}",
            f"r_obstacle={self.r_obstacle:.6f}",
            f"f_obstacle={self.f_obstacle:.6f}",
            f"p_empty={self.p_empty:.6f}",
            f"r_empty={self.r_empty:.6f}",
            f"f_empty={self.f_empty:.6f}",
            f"tcr={self.tcr:.6f}",
            f"mae={self.mae:.6f}",
            "vacuous=" + (",".join(sorted(self.vacuous)) if self.vacuous else "none"),
        ]
        return "\n".join(lines) + "\n"

    CSV_HEADER = ("method,environment,p_obstacle,r_obstacle,f_obstacle,"
                  "p_empty,r_empty,f_empty,tcr,mae")

    def csv_row(self, method: str = "", environment: str = "") -> str:
        return (f"{method},{environment},"
                f"{self.p_obstacle:.4f},{self.r_obstacle:.4f},{self.f_obstacle:.4f},"
                f"{self.p_empty:.4f},{self.r_empty:.4f},{self.f_empty:.4f},"
                f"{self.tcr:.4f},{self.mae:.4f}")


def rescale(map_obj, method: str) -> ScalarGrid:
    """Bring a method's raw map to the signed [-1, 1] convention.

    prob: probability grid -> 2P - 1. fuzzy: (occupied, empty) grid pair ->
    mu_occ - mu_emp. antonym: the integrated map is already signed.
    """
    if method == "prob":
        grid = map_obj.grid if hasattr(map_obj, "grid") else map_obj
        return ScalarGrid(grid.spec, 2.0 * grid.values - 1.0, "signed")
    if method == "fuzzy":
        if hasattr(map_obj, "signed_map"):
            return map_obj.signed_map()
        occ, emp = map_obj
        if occ.spec != emp.spec:
            raise ValueError("grids must share a GridSpec")
        return ScalarGrid(occ.spec, occ.values - emp.values, "signed")
    if method == "antonym":
        grid = map_obj.integ if hasattr(map_obj, "integ") else map_obj
        return ScalarGrid(grid.spec, grid.values.copy(), "signed")
    raise ValueError(f"unknown method {method!r}")


def discretize(signed: ScalarGrid, alpha: float) -> ScalarGrid:
    """Alpha-cut a signed map into {1, 0, -1}; +-alpha belong to the cuts."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    v = signed.values
    vals = np.where(v >= alpha, 1.0, np.where(v <= -alpha, -1.0, 0.0))
    return ScalarGrid(signed.spec, vals, "ternary")


def confusion(pred: ScalarGrid, ref: ScalarGrid) -> ConfusionMatrix3:
    """Count cells by (predicted class, actual class)."""
    if pred.spec != ref.spec:
        raise ValueError("grids must share a GridSpec")

    def class_index(values):
        return np.where(values == 1.0, 0, np.where(values == -1.0, 1, 2))

    pi = class_index(pred.values).ravel()
    ai = class_index(ref.values).ravel()
    counts = np.zeros((3, 3), dtype=np.int64)
    np.add.at(counts, (pi, ai), 1)
    return ConfusionMatrix3(counts)


def precision_recall(m: ConfusionMatrix3) -> PrecisionRecall:
    """Per-class precision/recall; zero-denominator ratios are flagged 0."""
    vacuous = set()

    def ratio(num, den, name):
        if den == 0:
            vacuous.add(name)
            return 0.0
        return num / den

    p_o = ratio(m.oto, m.oto + m.efo + m.ufo, "p_obstacle")
    r_o = ratio(m.oto, m.oto + m.ofe + m.ofu, "r_obstacle")
    p_e = ratio(m.ete, m.ete + m.ofe + m.ufe, "p_empty")
    r_e = ratio(m.ete, m.efo + m.ete + m.efu, "r_empty")
    return PrecisionRecall(p_o, r_o, p_e, r_e, frozenset(vacuous))


def f_measure(p: float, r: float, beta: float = 2.0) -> float:
    """Weighted harmonic mean (1+beta) / (1/P + beta/R), as printed."""
    denom = r + beta * p
    if denom == 0.0:
        return 0.0
    return (1.0 + beta) * p * r / denom


def tcr(f_obstacle: float, f_empty: float) -> float:
    """Total combined rate: arithmetic mean of the two f-measures."""
    return 0.5 * (f_obstacle + f_empty)


def mae(ref: ScalarGrid, obtained: ScalarGrid) -> float:
    """Mean absolute per-cell difference; in [0, 2] for signed maps."""
    if ref.spec != obtained.spec:
        raise ValueError("grids must share a GridSpec")
    return float(np.mean(np.abs(ref.values - obtained.values)))


def evaluate_map(signed: ScalarGrid, ref: ScalarGrid,
                 alpha: float = DEFAULT_ALPHA) -> EvalReport:
    """Full evaluation of one signed map against a ternary reference."""
    pred = discretize(signed, alpha)
    m = confusion(pred, ref)
    pr = precision_recall(m)
    f_o = f_measure(pr.p_obstacle, pr.r_obstacle)
    f_e = f_measure(pr.p_empty, pr.r_empty)
    return EvalReport(m, alpha,
                      pr.p_obstacle, pr.r_obstacle, f_o,
                      pr.p_empty, pr.r_empty, f_e,
                      tcr(f_o, f_e), mae(ref, signed), pr.vacuous)


def tcr_sweep(signed: ScalarGrid, ref: ScalarGrid,
              alphas=DEFAULT_SWEEP_ALPHAS) -> list[tuple[float, float]]:
    """(alpha, TCR) across a monotone alpha grid (30 points by default)."""
    out = []
    for alpha in alphas:
        report = evaluate_map(signed, ref, alpha)
        out.append((float(alpha), report.tcr))
    return out
