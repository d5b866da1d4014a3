"""Indra representations: relational angular-distance profiles of embeddings.

Thin wrapper around the C++ core (`indra._core`). The main entry points:

- ``EmbeddingSet(data, ids=None, provenance="")`` wraps an (n, d) float array.
- ``build_indra`` / ``build_paired_indra`` compute relational profiles.
- ``match`` ranks one modality's rows against the other's.
- ``verify_lawvere`` / ``check_faithfulness`` / ``verify_all`` certify the
  metric and Yoneda properties numerically.
- ``train_probe`` / ``evaluate_probe`` run the linear-probe protocol.
- ``load_embeddings`` / ``save_matrix`` read and write the binary format.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
