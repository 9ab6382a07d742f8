"""Matrix-free truncated SVD with closed-form graph representation models."""

import os as _os

# FSVD_THREADS caps BLAS parallelism for reproducible timings. Must happen
# before numpy loads, hence before any submodule import.
_threads = _os.environ.get("FSVD_THREADS", "")
if _threads.isdigit() and int(_threads) > 0:
    for _name in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                  "VECLIB_MAXIMUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_name, _threads)
del _os, _threads

from .errors import (DegenerateInputError, FsvdError, InputError,
                     MetricUndefinedError, NumericError, ParseError)
from .sparse import (CsrMatrix, EdgeList, csr_from_edges, degree_vector,
                     renormalized_adjacency, spmm, transition_matrix)
from .linop import (LinearOperator, WysConfig, centered_op, csr_op, dense_op,
                    jkn_materialize, operator_pair, wys_operator)
from .decomposition import (DROP_TOLERANCE, ErrorEstimate, FsvdParams,
                            SvdResult, fsvd, orthonormalize,
                            pseudoinverse_apply, reconstruction_error,
                            small_svd)
from .models import (ClassifierModel, EmbeddingModel, LabelMatrix,
                     augment_features, one_hot_labels, pca_reduce,
                     predict_labels, score_edges, train_jkn_classifier,
                     train_wys_embedding)
from .metrics import EdgeSplit, accuracy, roc_auc, split_edges

__version__ = "0.1.0"

__all__ = [
    "CsrMatrix", "EdgeList", "csr_from_edges", "degree_vector",
    "renormalized_adjacency", "spmm", "transition_matrix",
    "LinearOperator", "WysConfig", "centered_op", "csr_op", "dense_op",
    "jkn_materialize", "operator_pair", "wys_operator",
    "DROP_TOLERANCE", "ErrorEstimate", "FsvdParams", "SvdResult", "fsvd",
    "orthonormalize", "pseudoinverse_apply", "reconstruction_error",
    "small_svd",
    "ClassifierModel", "EmbeddingModel", "LabelMatrix", "augment_features",
    "one_hot_labels", "pca_reduce", "predict_labels", "score_edges",
    "train_jkn_classifier", "train_wys_embedding",
    "EdgeSplit", "accuracy", "roc_auc", "split_edges",
    "DegenerateInputError", "FsvdError", "InputError",
    "MetricUndefinedError", "NumericError", "ParseError",
    "__version__",
]
