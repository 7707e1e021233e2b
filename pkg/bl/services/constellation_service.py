# Copyright (c) 2024 by Jonathan AW
# constellation_service.py
# Summary: Constellation export of the phase transformer output and k-means cluster tightness of I/Q scatters.
"""
Tightness of a scatter = mean squared distance of its points to the nearest of k k-means centres
(k = the scheme's cluster count, 10 restarts). A single frame's tightness is unchanged by a rotation of
the whole frame, so de-rotation shows up in the pooled tightness of many frames of one scheme, whose
individual phase offsets smear the pooled scatter unless they are removed.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from sklearn.cluster import KMeans

from bl.factories.modulation_factory import ModulationFactory
from bl.model.network import PetCgdnn
from bl.modulations.dataset_synth import Frame
from exceptions import InvalidConfigurationException

logger = logging.getLogger(__name__)

KMEANS_RESTARTS = 10


def cluster_tightness(points: np.ndarray, k: int, seed: int = 0) -> float:
    """points: [N, 2] (I, Q) pairs."""
    points = np.asarray(points, dtype=np.float64)
    k = min(k, len(np.unique(points, axis=0)))
    kmeans = KMeans(n_clusters=k, n_init=KMEANS_RESTARTS, random_state=seed).fit(points)
    return float(kmeans.inertia_ / points.shape[0])


@dataclass
class TightnessRow:
    scope: str  # frame index or "pooled"
    scheme: str
    k: int
    tightness_in: float
    tightness_out: float


@dataclass
class ConstellationExport:
    samples: List[tuple] = field(default_factory=list)  # (frame_id, sample_index, I_in, Q_in, I_out, Q_out, phi_hat)
    tightness: List[TightnessRow] = field(default_factory=list)

    def mean_frame_tightness(self) -> Dict[str, float]:
        rows = [r for r in self.tightness if r.scope != "pooled"]
        return {"in": float(np.mean([r.tightness_in for r in rows])), "out": float(np.mean([r.tightness_out for r in rows]))}

    def pooled(self) -> Dict[str, TightnessRow]:
        return {r.scheme: r for r in self.tightness if r.scope == "pooled"}


class ConstellationService:

    def __init__(self, schemes: Sequence[str], seed: int = 0):
        self.schemes = list(schemes)
        self.seed = seed

    def _cluster_count(self, class_id: int) -> int:
        return ModulationFactory.get_modulation(self.schemes[class_id]).cluster_count

    def export_constellation(self, m: PetCgdnn, frames: Sequence[Frame]) -> ConstellationExport:
        """
        Run the estimator and transformer on every frame; collect input/output samples and tightness.
        """
        if not m.spec.has_estimator:
            raise InvalidConfigurationException("Constellation export needs the full model (it has no phase transformer otherwise).")
        if not frames:
            return ConstellationExport()

        x = np.stack([f.iq for f in frames]).astype(np.float32)
        _, phi, transformed = m.forward(x)
        export = ConstellationExport()
        pooled_in: Dict[int, List[np.ndarray]] = {}
        pooled_out: Dict[int, List[np.ndarray]] = {}

        for frame_id, frame in enumerate(frames):
            iq_in, iq_out = frame.iq, transformed[frame_id]
            for l in range(iq_in.shape[1]):
                export.samples.append((frame_id, l, float(iq_in[0, l]), float(iq_in[1, l]),
                                       float(iq_out[0, l]), float(iq_out[1, l]), float(phi[frame_id])))
            k = self._cluster_count(frame.class_id)
            export.tightness.append(TightnessRow(str(frame_id), self.schemes[frame.class_id], k,
                                                 cluster_tightness(iq_in.T, k, self.seed),
                                                 cluster_tightness(iq_out.T, k, self.seed)))
            pooled_in.setdefault(frame.class_id, []).append(iq_in.T)
            pooled_out.setdefault(frame.class_id, []).append(iq_out.T)

        for class_id in sorted(pooled_in):
            k = self._cluster_count(class_id)
            export.tightness.append(TightnessRow("pooled", self.schemes[class_id], k,
                                                 cluster_tightness(np.concatenate(pooled_in[class_id]), k, self.seed),
                                                 cluster_tightness(np.concatenate(pooled_out[class_id]), k, self.seed)))
        logger.info("Exported constellation of %d frames (%d samples)", len(frames), len(export.samples))
        return export


def export_constellation(m: PetCgdnn, frames: Sequence[Frame], schemes: Sequence[str], seed: int = 0) -> ConstellationExport:
    return ConstellationService(schemes, seed).export_constellation(m, frames)
