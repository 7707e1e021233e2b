# Copyright (c) 2024 by Jonathan AW
# sparsity_schedule.py
# Summary: Polynomial (cubic) gradual sparsity schedule evaluated on its pruning-step grid.
"""
    s_t = s_f + (s_i - s_f) * (1 - (t - t0) / (n * dt))^3,   t in {t0, t0 + dt, ..., t0 + n * dt}

The endpoints return s_i and s_f exactly.
"""

import math
from dataclasses import asdict, dataclass
from typing import List

from exceptions import InvalidConfigurationException, ScheduleRangeException
from utils.data_validation import validate_sparsity_schedule_data


@dataclass(frozen=True)
class SparsitySchedule:
    initial_sparsity: float
    final_sparsity: float
    start_step: int
    frequency: int
    increments: int

    def __post_init__(self):
        is_valid, message = validate_sparsity_schedule_data(asdict(self))
        if not is_valid:
            raise InvalidConfigurationException(message)

    @property
    def end_step(self) -> int:
        return self.start_step + self.increments * self.frequency

    def grid(self) -> List[int]:
        return [self.start_step + i * self.frequency for i in range(self.increments + 1)]

    def is_pruning_step(self, t: int) -> bool:
        return self.start_step <= t <= self.end_step and (t - self.start_step) % self.frequency == 0

    def sparsity_at(self, t: int) -> float:
        if not self.is_pruning_step(t):
            raise ScheduleRangeException(f"Step {t} is not on the schedule grid {self.start_step}..{self.end_step} every {self.frequency}.")
        if t == self.start_step:
            return self.initial_sparsity
        if t == self.end_step:
            return self.final_sparsity
        progress = (t - self.start_step) / (self.increments * self.frequency)
        return self.final_sparsity + (self.initial_sparsity - self.final_sparsity) * (1.0 - progress) ** 3


def sparsity_at(sched: SparsitySchedule, t: int) -> float:
    return sched.sparsity_at(t)


def default_schedule(total_steps: int, final_sparsity: float, frequency: int = 100,
                     initial_sparsity: float = 0.0, start_step: int = 0) -> SparsitySchedule:
    """
    Schedule whose last pruning step is the last training step or earlier: n = (total_steps - 1 - t0) // dt.
    """
    increments = (total_steps - 1 - start_step) // frequency if frequency >= 1 else 0
    if increments < 1:
        raise InvalidConfigurationException(
            f"{total_steps} training steps cannot hold a pruning schedule starting at {start_step} every {frequency} steps.")
    return SparsitySchedule(initial_sparsity, final_sparsity, start_step, frequency, increments)


def steps_per_epoch(frames: int, batch_size: int) -> int:
    return math.ceil(frames / batch_size)
