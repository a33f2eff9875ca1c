"""Exception hierarchy shared across the library.

Every error the service layer has to translate into an API response lives
here, so the HTTP mapping can key off one registry of types.
"""

from __future__ import annotations


class AgromlError(Exception):
    """Base class for all library errors."""

    code = "internal_error"


# --- dataset / tabular ---------------------------------------------------

class MissingFile(AgromlError):
    code = "missing_file"


class HeaderMismatch(AgromlError):
    code = "header_mismatch"

    def __init__(self, expected, found):
        super().__init__(f"expected header {expected!r}, found {found!r}")
        self.expected = expected
        self.found = found


class RowParseError(AgromlError):
    code = "row_parse_error"

    def __init__(self, row, column, detail):
        super().__init__(f"row {row}, column {column!r}: {detail}")
        self.row = row
        self.column = column


class NonFiniteValue(AgromlError):
    code = "non_finite_value"


class ClassTooSmall(AgromlError):
    code = "class_too_small"

    def __init__(self, class_name, count, k):
        super().__init__(f"class {class_name!r} has {count} samples, need >= {k}")
        self.class_name = class_name
        self.count = count


class InvalidK(AgromlError):
    code = "invalid_k"


class EmptyFitSet(AgromlError):
    code = "empty_fit_set"


class LengthMismatch(AgromlError):
    code = "length_mismatch"


class EmptyInput(AgromlError):
    code = "empty_input"


# --- classifiers ----------------------------------------------------------

class AllZeroCounts(AgromlError):
    code = "all_zero_counts"


class SingleClass(AgromlError):
    code = "single_class"


class DimensionMismatch(AgromlError):
    code = "dimension_mismatch"


class NonFiniteFeature(AgromlError):
    code = "non_finite_feature"


class NonConvergence(AgromlError):
    code = "non_convergence"

    def __init__(self, message, iterations):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class UnsupportedModel(AgromlError):
    code = "unsupported_model"


class InvalidSpec(AgromlError):
    code = "invalid_spec"


# --- model artifacts ------------------------------------------------------

class VersionUnsupported(AgromlError):
    code = "version_unsupported"


class CorruptArtifact(AgromlError):
    code = "corrupt_artifact"


# --- fertilizer -----------------------------------------------------------

class DuplicateCrop(AgromlError):
    code = "duplicate_crop"


class UnknownCrop(AgromlError):
    code = "unknown_crop"

    def __init__(self, crop, suggestions=()):
        hint = f"; closest known: {', '.join(suggestions)}" if suggestions else ""
        super().__init__(f"unknown crop {crop!r}{hint}")
        self.crop = crop
        self.suggestions = list(suggestions)


class NegativeInput(AgromlError):
    code = "negative_input"


# --- segmentation / explanation -------------------------------------------

class TooManySegments(AgromlError):
    code = "too_many_segments"


class SingularSystem(AgromlError):
    code = "singular_system"


class SegmentationFailure(AgromlError):
    code = "segmentation_failure"


class InconsistentSegmentCount(AgromlError):
    code = "inconsistent_segment_count"


class PredictorCallFailed(AgromlError):
    code = "predictor_call_failed"

    def __init__(self, sample_index, cause):
        super().__init__(f"predictor failed on perturbed sample {sample_index}: {cause}")
        self.sample_index = sample_index
        self.cause = cause


class ExplainTimeout(AgromlError):
    code = "explain_timeout"


# --- predictor gateway ----------------------------------------------------

class ExternalUnavailable(AgromlError):
    code = "external_unavailable"

    def __init__(self, message, retries):
        super().__init__(f"{message} (after {retries} retries)")
        self.retries = retries


class ProtocolViolation(AgromlError):
    code = "protocol_violation"


class TooFewClasses(AgromlError):
    code = "too_few_classes"


class UnreadableImage(AgromlError):
    code = "unreadable_image"

    def __init__(self, path, detail=""):
        super().__init__(f"cannot read image {path}: {detail}")
        self.path = str(path)


class UndecodableImage(AgromlError):
    code = "undecodable_image"


# --- service / cli --------------------------------------------------------

class ConfigInvalid(AgromlError):
    code = "config_invalid"

    def __init__(self, field, detail):
        super().__init__(f"config field {field!r}: {detail}")
        self.field = field


class UnknownModelName(AgromlError):
    code = "unknown_model_name"

    def __init__(self, name, valid):
        super().__init__(f"unknown model {name!r}; valid: {', '.join(valid)}")
        self.name = name
        self.valid = list(valid)
