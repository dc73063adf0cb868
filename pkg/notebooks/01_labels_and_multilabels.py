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
# # From label strings to multilabels
#
# Labels can be written with the raw private-use glyphs or with `:ALIAS:`
# atoms. Both forms tokenize to the same symbols.

# %%
from hamcheck import decoding_efficiency, encode, ingest_corpus, load_inventory, parse_label, serialize
from hamcheck.parser import SourceForm
from hamcheck.synthetic import bundled_data_dir

inv = load_inventory()
print(inv.version, len(inv), "symbols")

# %%
label = ":SYM_PAR::HS_FIST::EFD_U::BACKSLASH::EFD_UL::PALM_AWAY::LOC_DIST_CLOSE::LOC_CHIN::MOV_CIRC:"
sign, diags = parse_label(label, inv)
print(sign)
print(diags)

# %% [markdown]
# The serializer writes blocks in canonical order, so the distance symbol
# moves behind the body part.

# %%
print(serialize(sign, inv))
raw = serialize(sign, inv, SourceForm.RAW)
print(len(raw), "raw scalars;", parse_label(raw, inv)[0] == sign)

# %% [markdown]
# Broken labels still come back with positioned diagnostics.

# %%
for text in ["", ":HS_FLAT::EFD_U:", ":HS_FLAT::EFD_U::PALM_L::SYM_PAR:", ":HS_FLAT::WHAT:"]:
    s, d = parse_label(text, inv)
    print(repr(text), "->", "ok" if s else "failed", [str(x) for x in d])

# %% [markdown]
# ## Reduction and decoding efficiency
#
# The ten-slot multilabel keeps the first movement and the primary of each
# alternation. Glosses whose labels differ only in dropped parts collide.

# %%
print(encode(sign, inv).to_text())

corpus = ingest_corpus(bundled_data_dir() / "corpora" / "synthetic100.tsv", inv)
eta = decoding_efficiency(corpus)
print(f"eta = {eta.eta_percent:.1f}%  histogram = {eta.collision_histogram}")

# %%
from collections import defaultdict

groups = defaultdict(list)
for r in corpus.records:
    groups[r.multilabel].append(r)
for label, members in groups.items():
    if len(members) > 1:
        for m in members:
            print(m.gloss_text, m.hamnosys if m.hamnosys.isascii() else "(raw form)")
        print()
        break
