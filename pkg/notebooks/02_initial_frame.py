# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Finding the initial frame
#
# Each hand contributes up to twelve candidate frames: the first local
# maximum and the first local minimum of the x and y tracks of the wrist and
# the two thumb joints. The chosen frame is their lower median.

# %%
import numpy as np

from hamcheck import TopologyConfig, detect_initial_frame, first_local_extremum
from hamcheck.kinematics import smooth
from hamcheck.synthetic import noisy_hand_series, unanimous_peak_series

# %%
print(first_local_extremum([0, 1, 2, 1, 0]), first_local_extremum([0, 1, 2, 3]),
      first_local_extremum([0, 1, 1, 0]))

# %%
r = detect_initial_frame(unanimous_peak_series())
print(r.chosen, r.frames)

# %% [markdown]
# With 2% noise the raw tracks are full of tiny wiggles; a five-frame
# moving average removes most of them.

# %%
rng = np.random.default_rng(0)
series = noisy_hand_series("sine", peak=14, n_frames=32, rng=rng)
wrist_x = series.points[:, 0, 0]
print("raw:     ", first_local_extremum(wrist_x))
print("smoothed:", first_local_extremum(wrist_x, window=5))
print(np.round(smooth(wrist_x, 5)[10:19], 3))

# %%
for w in (1, 3, 5, 7):
    cfg = TopologyConfig.default("hand21").with_params(window=w)
    res = detect_initial_frame(series, cfg)
    print(f"w={w}: chosen={res.chosen} candidates={res.frames}")

# %% [markdown]
# Accuracy over many random trajectories:

# %%
cfg = TopologyConfig.default("hand21").with_params(window=5)
errors = []
for n in range(200):
    kind = ("sine", "ramp")[n % 2]
    peak = int(rng.integers(10, 21))
    s = noisy_hand_series(kind, peak, 2 * peak, rng)
    errors.append(detect_initial_frame(s, cfg).chosen - peak)
print(np.bincount(np.abs(errors)))
