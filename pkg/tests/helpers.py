import numpy as np

from motor_tp.mocap_io import MotionSequence


def make_seq(frames, rate=120.0, labels=None):
    frames = np.asarray(frames, dtype=float)
    if frames.ndim == 1:
        frames = frames[:, None]
    if labels is None:
        labels = [f"f{k}" for k in range(frames.shape[1])]
    return MotionSequence(rate, labels, frames)
