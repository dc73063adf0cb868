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
# # Location consistency and class counts
#
# For every record with a landmark file, the nose-to-wrist distance at the
# detected initial frame is grouped by the label's location class.

# %%
from hamcheck import class_distribution, ingest_corpus, load_inventory, location_consistency
from hamcheck.reports import to_csv
from hamcheck.synthetic import bundled_data_dir

inv = load_inventory()
corpus = ingest_corpus(bundled_data_dir() / "consistency" / "consistency.tsv", inv)
report = location_consistency(corpus, "tb", "right")
print(to_csv(report))
print(report.frames)

# %% [markdown]
# A class seen once gets a mean but no standard deviation.

# %%
print(report.row("LOC_NECK", "L1"))

# %% [markdown]
# Reports merge, so a corpus can be processed in pieces.

# %%
a = location_consistency(corpus.subset(corpus.records[:2]), require_records=False)
b = location_consistency(corpus.subset(corpus.records[2:]), require_records=False)
print(a.merge(b) == report)

# %%
big = ingest_corpus(bundled_data_dir() / "corpora" / "synthetic100.tsv", inv)
dist = class_distribution(big)
for slot in ("handshape_base", "palm", "location_tb"):
    counts = dist.counts[slot]
    unused = [dist.aliases[slot][i] for i, c in enumerate(counts) if c == 0]
    print(f"{slot}: {dist.total(slot)} records, {len(unused)} unused classes")
