"""Survey service core: sessions, task dispensing, response collection.

Respondents work through a fixed task order: every artificial case first,
then the contradicting pairs assigned to their group, then one think-aloud
prompt. Pairs are partitioned round-robin across groups so each group
handles roughly 1/groups of the selected pairs, and the partitions are
disjoint with a complete union.

Task payloads are blind: variants and pair members appear under neutral
shuffled labels ("code-1", ...), and no payload ever carries similarity
degrees, detector names, or rank hints. The label shuffle is a pure
function of the session's recorded seed, so dispensing a task never has to
write anything and replaying the log fully restores the service state.
"""

from __future__ import annotations

import datetime as _dt
import enum
import random
import uuid
from dataclasses import dataclass

from ..casegen import ArtificialCase
from .store import EventLog

SCHEMA_VERSION = 1

DEFAULT_THINK_ALOUD_PROMPT = (
    "Describe, in as much detail as you can, how you decided which codes "
    "looked plagiarized in the tasks you just completed. What did you look at, "
    "what did you compare, and what convinced you?"
)


class TaskKind(enum.Enum):
    CASE_RANKING = "CASE_RANKING"
    PAIR_PREFERENCE = "PAIR_PREFERENCE"
    THINK_ALOUD = "THINK_ALOUD"


class UnknownSession(KeyError):
    pass


class UnknownTask(KeyError):
    pass


class DuplicateSubmission(ValueError):
    pass


class InvalidResponse(ValueError):
    pass


class InvalidRanking(InvalidResponse):
    pass


@dataclass(frozen=True)
class PairItem:
    """One contradicting pair as served to respondents."""

    pair_id: str
    original_source: str
    member_ids: tuple[str, str]
    member_sources: tuple[str, str]


@dataclass
class Session:
    session_id: str
    respondent_label: str
    group_index: int
    seed: str
    created_at: str


@dataclass(frozen=True)
class _Task:
    task_id: str
    kind: TaskKind
    payload_ids: tuple[str, ...]  # variant or member ids in config order


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


class SurveyService:
    def __init__(
        self,
        store: EventLog,
        cases: list[ArtificialCase],
        pairs: list[PairItem],
        group_count: int = 3,
        seed: int = 0,
        think_aloud_prompt: str = DEFAULT_THINK_ALOUD_PROMPT,
    ):
        if group_count < 1:
            raise ValueError("group_count must be >= 1")
        self.store = store
        self.cases = list(cases)
        self.pairs = list(pairs)
        self.group_count = group_count
        self.seed = seed
        self.think_aloud_prompt = think_aloud_prompt
        self._cases_by_id = {case.case_id: case for case in self.cases}
        self._pairs_by_id = {pair.pair_id: pair for pair in self.pairs}
        self.sessions: dict[str, Session] = {}
        self._session_order: list[str] = []
        self.responses: dict[tuple[str, str], dict] = {}
        self._response_order: list[dict] = []
        self._replay()

    # -- persistence ------------------------------------------------------

    def _replay(self) -> None:
        for record in self.store.replay():
            if record.get("event") == "session":
                session = Session(
                    session_id=record["sessionId"],
                    respondent_label=record["label"],
                    group_index=record["groupIndex"],
                    seed=record["seed"],
                    created_at=record["createdAt"],
                )
                self.sessions[session.session_id] = session
                self._session_order.append(session.session_id)
            elif record.get("event") == "response":
                key = (record["sessionId"], record["taskId"])
                if key not in self.responses:
                    self.responses[key] = record
                    self._response_order.append(record)

    # -- sessions ---------------------------------------------------------

    def create_session(self, respondent_label: str) -> Session:
        session = Session(
            session_id=uuid.uuid4().hex,
            respondent_label=respondent_label,
            group_index=len(self._session_order) % self.group_count,
            seed=f"{self.seed}:{len(self._session_order)}",
            created_at=_now(),
        )
        self.store.append({
            "schemaVersion": SCHEMA_VERSION,
            "event": "session",
            "sessionId": session.session_id,
            "label": session.respondent_label,
            "groupIndex": session.group_index,
            "seed": session.seed,
            "createdAt": session.created_at,
        })
        self.sessions[session.session_id] = session
        self._session_order.append(session.session_id)
        return session

    def _session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    # -- tasks ------------------------------------------------------------

    def pair_ids_for_group(self, group_index: int) -> list[str]:
        return [
            pair.pair_id
            for i, pair in enumerate(self.pairs)
            if i % self.group_count == group_index
        ]

    def tasks_for(self, session: Session) -> list[_Task]:
        tasks = [
            _Task(f"case:{case.case_id}", TaskKind.CASE_RANKING,
                  tuple(v.variant_id for v in case.variants))
            for case in self.cases
        ]
        for pair_id in self.pair_ids_for_group(session.group_index):
            tasks.append(_Task(f"pair:{pair_id}", TaskKind.PAIR_PREFERENCE,
                               self._pairs_by_id[pair_id].member_ids))
        tasks.append(_Task("describe", TaskKind.THINK_ALOUD, ()))
        return tasks

    def _pending_index(self, session: Session, tasks: list[_Task]) -> int:
        for index, task in enumerate(tasks):
            if (session.session_id, task.task_id) not in self.responses:
                return index
        return len(tasks)

    def _labels(self, session: Session, task: _Task) -> dict[str, str]:
        """Neutral presentation labels -> real ids, shuffled per session."""
        ids = list(task.payload_ids)
        rng = random.Random(f"{session.seed}:{task.task_id}")
        rng.shuffle(ids)
        return {f"code-{i + 1}": real_id for i, real_id in enumerate(ids)}

    def next_task(self, session_id: str) -> dict:
        """Payload for the first unanswered task, or a done marker."""
        session = self._session(session_id)
        tasks = self.tasks_for(session)
        index = self._pending_index(session, tasks)
        if index >= len(tasks):
            return {"schemaVersion": SCHEMA_VERSION, "done": True}
        task = tasks[index]
        payload = {
            "schemaVersion": SCHEMA_VERSION,
            "done": False,
            "taskId": task.task_id,
            "kind": task.kind.value,
            "taskIndex": index,
            "taskCount": len(tasks),
        }
        if task.kind is TaskKind.THINK_ALOUD:
            payload["prompt"] = self.think_aloud_prompt
            return payload
        labels = self._labels(session, task)
        if task.kind is TaskKind.CASE_RANKING:
            case = self._cases_by_id[task.task_id.removeprefix("case:")]
            sources = {v.variant_id: v.source for v in case.variants}
            payload["original"] = case.original
            payload["items"] = [
                {"label": label, "source": sources[real_id]}
                for label, real_id in sorted(labels.items())
            ]
        else:
            pair = self._pairs_by_id[task.task_id.removeprefix("pair:")]
            sources = dict(zip(pair.member_ids, pair.member_sources))
            payload["original"] = pair.original_source
            payload["items"] = [
                {"label": label, "source": sources[real_id]}
                for label, real_id in sorted(labels.items())
            ]
        return payload

    # -- responses --------------------------------------------------------

    def submit_response(self, session_id: str, task_id: str, kind: str,
                        payload: dict) -> dict:
        session = self._session(session_id)
        tasks = self.tasks_for(session)
        by_id = {task.task_id: (i, task) for i, task in enumerate(tasks)}
        if task_id not in by_id:
            raise UnknownTask(task_id)
        index, task = by_id[task_id]
        if (session_id, task_id) in self.responses:
            raise DuplicateSubmission(f"task {task_id} already answered")
        pending = self._pending_index(session, tasks)
        if index != pending:
            raise UnknownTask(f"task {task_id} has not been dispensed yet")
        if kind != task.kind.value:
            raise InvalidResponse(f"task {task_id} expects {task.kind.value}, got {kind}")

        labels = self._labels(session, task)
        resolved = self._validate(task, labels, payload)
        record = {
            "schemaVersion": SCHEMA_VERSION,
            "event": "response",
            "sessionId": session_id,
            "taskId": task_id,
            "kind": kind,
            "payload": resolved,
            "labels": labels,
            "submittedAt": _now(),
        }
        self.store.append(record)
        self.responses[(session_id, task_id)] = record
        self._response_order.append(record)
        return {
            "schemaVersion": SCHEMA_VERSION,
            "status": "accepted",
            "taskId": task_id,
        }

    def _validate(self, task: _Task, labels: dict[str, str], payload: dict) -> dict:
        if task.kind is TaskKind.THINK_ALOUD:
            text = payload.get("text")
            if not isinstance(text, str) or not text.strip():
                raise InvalidResponse("think-aloud response needs non-empty text")
            return {"text": text}
        if task.kind is TaskKind.PAIR_PREFERENCE:
            chosen_label = payload.get("chosen")
            if chosen_label not in labels:
                raise InvalidResponse(
                    f"preference must name one of {sorted(labels)}, got {chosen_label!r}"
                )
            chosen = labels[chosen_label]
            other = next(real for real in labels.values() if real != chosen)
            # preferred code takes the 1st rank, the other the 2nd
            return {"chosen": chosen, "ranks": {chosen: 1, other: 2}}
        ranks = payload.get("ranks")
        if not isinstance(ranks, dict):
            raise InvalidRanking("ranking payload must map labels to ranks")
        if set(ranks) != set(labels):
            raise InvalidRanking(
                f"ranking must cover exactly the presented labels {sorted(labels)}"
            )
        values = list(ranks.values())
        if not all(isinstance(r, int) and r >= 1 for r in values):
            raise InvalidRanking("ranks must be integers >= 1")
        for rank in set(values):
            better = sum(1 for other in values if other < rank)
            if rank != better + 1:
                raise InvalidRanking(
                    f"not a competition ranking: rank {rank} follows {better} better ranks"
                )
        return {"ranks": {labels[label]: rank for label, rank in ranks.items()}}

    # -- export -----------------------------------------------------------

    def export_responses(self, kind: str | None = None,
                         session_id: str | None = None) -> dict:
        records = [
            {k: v for k, v in record.items() if k != "event"}
            for record in self._response_order
            if (kind is None or record["kind"] == kind)
            and (session_id is None or record["sessionId"] == session_id)
        ]
        return {"schemaVersion": SCHEMA_VERSION, "responses": records}
