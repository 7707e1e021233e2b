# Copyright (c) 2024 by Jonathan AW
# dataset_synth.py
# Summary: Labeled I/Q frames, datasets with manifests, and the synthetic dataset generator.
"""
Every (scheme, snr) cell receives frames_per_cell frames. Frame i of cell (c, k) draws its symbols,
phase offset phi ~ U(-pi, pi), frequency offset omega ~ U(-omega_max, omega_max), optional Rayleigh gain
and its noise from the substream (seed, "datagen", c, k, i), so every frame is independent of the order
in which frames are generated.
"""

import hashlib
import json
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bl.factories.modulation_factory import ModulationFactory
from bl.modulations.base_modulation import BaseModulation
from bl.modulations.channel import ChannelParams, apply_channel
from exceptions import InvalidConfigurationException, InvalidDatasetException
from utils.config_utils import get_configuration_value
from utils.data_validation import validate_synth_config_data
from utils.rng_utils import substream

logger = logging.getLogger(__name__)

DEFAULT_SCHEMES = ("BPSK", "QPSK", "8PSK", "PAM4", "QAM16", "QAM64", "GFSK", "CPFSK")
DEFAULT_SNRS = tuple(range(-20, 20, 2))


@dataclass
class Frame:
    iq: np.ndarray  # [2, L] float32
    class_id: int
    snr_db: int
    channel: Optional[ChannelParams] = field(default=None, compare=False)  # provenance only, not stored on disk

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return (self.class_id == other.class_id and self.snr_db == other.snr_db
                and self.iq.shape == other.iq.shape and np.array_equal(self.iq, other.iq))


@dataclass
class Dataset:
    manifest: dict
    frames: List[Frame]

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def length(self) -> int:
        return self.manifest["length"]

    @property
    def classes(self) -> int:
        return len(self.manifest["schemes"])

    def histogram(self) -> Dict[Tuple[int, int], int]:
        return dict(Counter((f.class_id, f.snr_db) for f in self.frames))

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(X [N, 2, L] float32, class ids [N], snrs [N])."""
        if not self.frames:
            return (np.zeros((0, 2, self.length), dtype=np.float32), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
        x = np.stack([f.iq for f in self.frames]).astype(np.float32, copy=False)
        labels = np.array([f.class_id for f in self.frames], dtype=np.int64)
        snrs = np.array([f.snr_db for f in self.frames], dtype=np.int64)
        return x, labels, snrs

    def subset(self, indices: Sequence[int], name: Optional[str] = None) -> "Dataset":
        """Dataset of the selected frames; the manifest no longer promises a full cell grid."""
        manifest = dict(self.manifest)
        manifest["frames_per_cell"] = None
        manifest["subset"] = name
        return Dataset(manifest=manifest, frames=[self.frames[i] for i in indices])

    def manifest_hash(self) -> str:
        canonical = json.dumps(self.manifest, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def check_consistency(self) -> None:
        """Raise InvalidDatasetException if the frames disagree with the manifest."""
        if not self.frames:
            raise InvalidDatasetException("Dataset has no frames.")
        classes, length = self.classes, self.length
        for i, f in enumerate(self.frames):
            if f.iq.shape != (2, length):
                raise InvalidDatasetException(f"Frame {i} has shape {f.iq.shape}, manifest length is {length}.")
            if not 0 <= f.class_id < classes:
                raise InvalidDatasetException(f"Frame {i} has class {f.class_id}, manifest has {classes} classes.")
            if not np.all(np.isfinite(f.iq)):
                raise InvalidDatasetException(f"Frame {i} contains non-finite samples.")
        per_cell = self.manifest.get("frames_per_cell")
        if per_cell is not None:
            expected = {(c, s): per_cell for c in range(classes) for s in self.manifest["snrs"]}
            if self.histogram() != expected:
                raise InvalidDatasetException("Class/SNR histogram does not match the manifest.")


@dataclass
class SynthConfig:
    schemes: Sequence[str] = DEFAULT_SCHEMES
    length: int = 128
    snrs: Sequence[int] = DEFAULT_SNRS
    frames_per_cell: int = 200
    samples_per_symbol: int = 8
    pulse: str = 'rect'
    rolloff: float = 0.35
    omega_max: float = 0.01
    rayleigh: bool = False
    reduced: bool = False

    def __post_init__(self):
        self.schemes = list(self.schemes)
        self.snrs = list(self.snrs)
        is_valid, message = validate_synth_config_data(asdict(self), ModulationFactory.scheme_names())
        if not is_valid:
            raise InvalidConfigurationException(message)

    def manifest(self, seed: int) -> dict:
        data = asdict(self)
        data.pop("reduced")
        data["seed"] = seed
        return data


def modulate(scheme: Union[str, BaseModulation], symbols, samples_per_symbol: int = 1,
             pulse: str = 'rect', rolloff: float = 0.35, length: Optional[int] = None) -> np.ndarray:
    """
    Unit-average-power complex baseband sequence of the symbols (truncated to length when given).
    Unknown scheme names raise InvalidConfigurationException.
    """
    modulation = ModulationFactory.get_modulation(scheme) if isinstance(scheme, str) else scheme
    x = modulation.modulate(symbols, samples_per_symbol, pulse, rolloff)
    return x if length is None else x[:length]


def synth_frame(config: SynthConfig, seed: int, class_id: int, snr_index: int, frame_index: int,
                modulation: BaseModulation) -> Frame:
    rng = substream(seed, "datagen", class_id, snr_index, frame_index)
    symbol_count = math.ceil(config.length / config.samples_per_symbol)
    symbols = modulation.random_symbols(rng, symbol_count)
    x = modulate(modulation, symbols, config.samples_per_symbol, config.pulse, config.rolloff, config.length)

    snr_db = config.snrs[snr_index]
    channel = ChannelParams(
        gain=float(rng.rayleigh(scale=1.0 / np.sqrt(2.0))) if config.rayleigh else 1.0,
        omega=float(rng.uniform(-config.omega_max, config.omega_max)),
        phi=float(rng.uniform(-np.pi, np.pi)),
        snr_db=float(snr_db),
    )
    return Frame(iq=apply_channel(x, channel, rng), class_id=class_id, snr_db=snr_db, channel=channel)


def synth_dataset(config: SynthConfig, seed: int, threads: Optional[int] = None) -> Dataset:
    """
    Generate the full class x SNR grid. Cells may be generated on several threads; frame order is
    always class-major, then SNR, then frame index.
    """
    threads = threads or get_configuration_value('AMR_THREADS', 1)
    modulations = [ModulationFactory.get_modulation(name) for name in config.schemes]
    cells = [(c, k) for c in range(len(config.schemes)) for k in range(len(config.snrs))]

    def synth_cell(cell):
        c, k = cell
        return [synth_frame(config, seed, c, k, i, modulations[c]) for i in range(config.frames_per_cell)]

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        frames = [frame for cell_frames in executor.map(synth_cell, cells) for frame in cell_frames]

    dataset = Dataset(manifest=config.manifest(seed), frames=frames)
    dataset.check_consistency()
    logger.info("Synthesized %d frames: %d schemes x %d SNRs x %d frames, L=%d",
                len(frames), len(config.schemes), len(config.snrs), config.frames_per_cell, config.length)
    return dataset
