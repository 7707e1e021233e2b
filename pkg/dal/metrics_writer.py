# Copyright (c) 2024 by Jonathan AW
# metrics_writer.py
# Summary: Writes the CSV artifacts of training, evaluation, pruning, ablation and constellation runs.
"""
Every file is UTF-8 with a header row. Reals are written with repr() so a repeated run produces
byte-identical files.
"""

import csv
import logging
import os
from typing import Iterable, List, Sequence, Tuple

from bl.services.ablation_service import AblationReport
from bl.services.constellation_service import ConstellationExport
from bl.services.metrics_record import MetricsRecord

logger = logging.getLogger(__name__)

EPOCH_COLUMNS = ("epoch", "lr", "train_loss", "train_acc", "val_loss", "val_acc")
SNR_ACCURACY_COLUMNS = ("snr_db", "accuracy", "n")
ABLATION_COLUMNS = ("variant", "seed", "snr_db", "accuracy", "n")
ABLATION_SUMMARY_COLUMNS = ("variant", "snr_db", "mean", "std", "seeds")
CONSTELLATION_COLUMNS = ("frame_id", "sample_index", "I_in", "Q_in", "I_out", "Q_out", "phi_hat")
TIGHTNESS_COLUMNS = ("frame_id", "scheme", "k", "tightness_in", "tightness_out")
NNZ_COLUMNS = ("tensor", "size", "nnz", "sparsity")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.debug("Wrote %s", path)
    return path


def read_csv(path: str) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


class MetricsWriter:
    """
    Writes the CSV files of one run into out_dir (created on demand).
    """

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)

    def path(self, file_name: str) -> str:
        return os.path.join(self.out_dir, file_name)

    def write_epochs(self, record: MetricsRecord) -> str:
        rows = [(e.epoch, e.lr, e.train_loss, e.train_acc, e.val_loss, e.val_acc) for e in record.epochs]
        return write_csv(self.path("epochs.csv"), EPOCH_COLUMNS, rows)

    def write_snr_accuracy(self, record: MetricsRecord, file_name: str = "snr_accuracy.csv") -> str:
        rows = [(snr, bucket.accuracy, bucket.n) for snr, bucket in sorted(record.buckets.items())]
        return write_csv(self.path(file_name), SNR_ACCURACY_COLUMNS, rows)

    def write_confusions(self, record: MetricsRecord) -> List[str]:
        """One confusion_<snr>.csv per bucket; rows are true classes, columns predicted classes."""
        paths = []
        for snr, bucket in sorted(record.buckets.items()):
            classes = bucket.confusion.shape[0]
            rows = [[true_class] + bucket.confusion[true_class].tolist() for true_class in range(classes)]
            columns = ["true_class"] + [f"pred_{c}" for c in range(classes)]
            paths.append(write_csv(self.path(f"confusion_{snr}.csv"), columns, rows))
        return paths

    def write_evaluation(self, record: MetricsRecord) -> List[str]:
        return [self.write_snr_accuracy(record)] + self.write_confusions(record)

    def write_nnz_report(self, report: Sequence[Tuple[str, int, int, float]]) -> str:
        return write_csv(self.path("nnz_report.csv"), NNZ_COLUMNS, report)

    def write_ablation(self, report: AblationReport) -> List[str]:
        rows = [(r.variant, r.seed, r.snr_db, r.accuracy, r.n) for r in report.rows]
        return [write_csv(self.path("ablation.csv"), ABLATION_COLUMNS, rows),
                write_csv(self.path("ablation_summary.csv"), ABLATION_SUMMARY_COLUMNS, report.summary())]

    def write_constellation(self, export: ConstellationExport) -> List[str]:
        tightness = [(r.scope, r.scheme, r.k, r.tightness_in, r.tightness_out) for r in export.tightness]
        return [write_csv(self.path("constellation.csv"), CONSTELLATION_COLUMNS, export.samples),
                write_csv(self.path("tightness.csv"), TIGHTNESS_COLUMNS, tightness)]
