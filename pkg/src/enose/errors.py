"""Exception hierarchy shared by all pipeline stages."""

from __future__ import annotations


class ENoseError(Exception):
    """Base class for every toolkit error."""


# --- ingestion ---------------------------------------------------------------

class EmptyRun(ENoseError):
    pass


class MalformedCell(ENoseError):
    def __init__(self, row: int, col: int, token: str):
        super().__init__(f"non-numeric or non-finite token {token!r} at data row {row}, column {col}")
        self.row = row
        self.col = col
        self.token = token


class RaggedRow(ENoseError):
    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"data row {row} has {got} cells, expected {expected}")
        self.row = row


class SchemaMismatch(ENoseError):
    pass


class EmptyInput(ENoseError):
    pass


# --- splitting ---------------------------------------------------------------

class InvalidFraction(ENoseError):
    pass


class ClassTooSmall(ENoseError):
    pass


class TooFewPerClass(ENoseError):
    pass


class BadK(ENoseError):
    pass


# --- preprocessing / reduction -----------------------------------------------

class EmptyMatrix(ENoseError):
    pass


class MissingColumn(ENoseError):
    pass


class UnfittedReducer(ENoseError):
    pass


class BadComponentCount(ENoseError):
    pass


class DegenerateInput(ENoseError):
    pass


class DimensionMismatch(ENoseError):
    pass


class SingleClass(ENoseError):
    pass


# --- classifiers -------------------------------------------------------------

class EmptyNode(ENoseError):
    pass


class ShapeMismatch(ENoseError):
    pass


class DegenerateLabels(ENoseError):
    pass


# --- neural ------------------------------------------------------------------

class BadSpec(ENoseError):
    pass


class UnknownVariant(ENoseError):
    pass


class NonFiniteLoss(ENoseError):
    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(f"non-finite loss {loss} at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch
        self.loss = loss


# --- ensemble / evaluation ---------------------------------------------------

class ClassTableMismatch(ENoseError):
    pass


class EmptyEnsemble(ENoseError):
    pass


class EmptyGrid(ENoseError):
    pass


class LabelOutOfRange(ENoseError):
    pass


class BadSizes(ENoseError):
    pass


# --- cli ---------------------------------------------------------------------

class ConfigError(ENoseError):
    pass
