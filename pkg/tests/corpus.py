"""The verification corpus shared by the theorem and acceptance tests:
every builtin group plus the shipped complete set of order-16 groups."""
from functools import lru_cache
from pathlib import Path

from autl.config import RunConfig
from autl.constructions import builtin_corpus
from autl.groupfile import load_corpus_dir
from autl.theorems import GroupData, analyse

ROOT = Path(__file__).resolve().parent.parent
ORDER16_DIR = ROOT / "groupfiles" / "order16"


@lru_cache(maxsize=None)
def order16_groups():
    groups, skipped = load_corpus_dir(ORDER16_DIR)
    assert not skipped, skipped
    return tuple(groups)


@lru_cache(maxsize=None)
def full_corpus():
    return tuple(builtin_corpus(243)) + order16_groups()


@lru_cache(maxsize=None)
def analysed():
    """(GroupData, TheoremReport) per corpus group, sharing one Aut(G) computation."""
    cfg = RunConfig(parallelism_degree=1)
    out = []
    for G in full_corpus():
        d = GroupData(G, cfg)
        out.append((d, analyse(G, data=d)))
    return tuple(out)
