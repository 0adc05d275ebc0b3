"""Gas-sensor fusion classification toolkit."""

from .dataset import (
    Dataset,
    FoldPlan,
    RunTable,
    merge_runs,
    parse_run_csv,
    stratified_kfold,
    stratified_split,
)
from .preprocess import (
    LabelEncoder,
    Scaler,
    VersionSpec,
    apply_version,
    encode_labels,
    feature_target_correlation,
    fit_scaler,
)
from .reduce import LdaModel, PcaModel, lda_fit, pca_fit, pca_transform

__version__ = "0.1.0"
