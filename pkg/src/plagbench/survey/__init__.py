from .service import (
    DuplicateSubmission,
    InvalidRanking,
    InvalidResponse,
    PairItem,
    Session,
    SurveyService,
    TaskKind,
    UnknownSession,
    UnknownTask,
)
from .store import EventLog, StoreUnavailable

__all__ = [
    "DuplicateSubmission",
    "EventLog",
    "InvalidRanking",
    "InvalidResponse",
    "PairItem",
    "Session",
    "StoreUnavailable",
    "SurveyService",
    "TaskKind",
    "UnknownSession",
    "UnknownTask",
]
