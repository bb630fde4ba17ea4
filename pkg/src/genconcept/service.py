"""HTTP JSON API for the semi-automatic grouping wizard.

Sessions persist as append-only JSONL decision logs, one file per session;
replaying a log reconstructs the exact state, which keeps the wizard
crash-safe and makes state equality trivially testable.  Mutations on one
session serialize through a per-session lock.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import io as ctx_io
from .context import FormalContext
from .errors import ConceptCeilingError, FormatError, GenconceptError
from .generalize import (
    Axis,
    Group,
    GroupingProposal,
    GroupingScheme,
    Mode,
    generalize_attributes,
    group_column,
    propose_groupings,
)
from .lattice import DEFAULT_CEILING, count_concepts, enumerate_concepts

DEFAULT_LISTEN = "127.0.0.1:8431"
LISTEN_ENV = "GENCONCEPT_LISTEN"


def fingerprint(member_names) -> str:
    """Order-independent hash of a member name set."""
    digest = hashlib.sha256("\0".join(sorted(member_names)).encode()).hexdigest()
    return digest[:16]


@dataclass
class WizardSession:
    session_id: str
    ctx: FormalContext
    minsupp: Fraction
    mode: Mode
    accepted: list[Group] = field(default_factory=list)
    rejected: set[str] = field(default_factory=set)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # -- derived state -------------------------------------------------------

    def accepted_fingerprints(self) -> dict[str, Group]:
        return {
            fingerprint(self.ctx.attribute_names(g.members)): g for g in self.accepted
        }

    def resolved_attributes(self) -> frozenset[int]:
        out: set[int] = set()
        for g in self.accepted:
            out |= g.members
        return frozenset(out)

    def unresolved_attributes(self) -> frozenset[int]:
        return frozenset(range(self.ctx.n_attributes)) - self.resolved_attributes()

    def current_proposals(self) -> list[GroupingProposal]:
        proposals = propose_groupings(
            self.ctx,
            self.minsupp,
            self.mode,
            restrict=self.unresolved_attributes(),
            taken_names=[g.name for g in self.accepted],
        )
        return [
            p
            for p in proposals
            if fingerprint(self.ctx.attribute_names(p.members)) not in self.rejected
        ]

    def scheme(self, extra_groups: list[Group] = ()) -> GroupingScheme:
        groups = tuple(self.accepted) + tuple(extra_groups)
        return GroupingScheme(Axis.ATTRIBUTES, self.mode, groups, keep_ungrouped=True)

    def export_context(self) -> FormalContext:
        return generalize_attributes(self.ctx, self.scheme())


class SessionStore:
    """In-memory sessions backed by per-session JSONL logs on disk."""

    def __init__(self, state_dir: str | Path | None, ceiling: int = DEFAULT_CEILING):
        self.state_dir = Path(state_dir) if state_dir else None
        self.ceiling = ceiling
        self.sessions: dict[str, WizardSession] = {}
        self._lock = threading.Lock()
        if self.state_dir:
            self.state_dir.mkdir(parents=True, exist_ok=True)
            self._replay_all()

    # -- persistence -----------------------------------------------------------

    def _log_path(self, session_id: str) -> Path | None:
        if self.state_dir is None:
            return None
        return self.state_dir / f"{session_id}.jsonl"

    def _append(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        if path is None:
            return
        with path.open("a") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def _replay_all(self) -> None:
        for path in sorted(self.state_dir.glob("*.jsonl")):
            session = self._replay(path)
            if session is not None:
                self.sessions[session.session_id] = session

    def _replay(self, path: Path) -> WizardSession | None:
        session: WizardSession | None = None
        for line in path.read_text().splitlines():
            event = json.loads(line)
            kind = event["event"]
            if kind == "create":
                session = WizardSession(
                    event["session_id"],
                    ctx_io.read_cxt(event["context"]),
                    Fraction(event["minsupp"]),
                    Mode(event["mode"]),
                )
            elif session is None:
                raise FormatError(f"decision log {path} does not start with create")
            elif kind == "accept":
                session.accepted.append(
                    Group(event["name"], session.ctx.attribute_set(event["members"]))
                )
            elif kind == "reject":
                session.rejected.add(event["fingerprint"])
        return session

    # -- session lifecycle --------------------------------------------------------

    def create(self, ctx: FormalContext, minsupp: Fraction, mode: Mode) -> WizardSession:
        session_id = uuid.uuid4().hex[:12]
        session = WizardSession(session_id, ctx, minsupp, mode)
        with self._lock:
            self.sessions[session_id] = session
        self._append(
            session_id,
            {
                "event": "create",
                "session_id": session_id,
                "context": ctx_io.write_cxt(ctx),
                "minsupp": str(minsupp),
                "mode": mode.value,
            },
        )
        return session

    def get(self, session_id: str) -> WizardSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            self.sessions.pop(session_id, None)
        path = self._log_path(session_id)
        if path is not None and path.exists():
            path.unlink()

    # -- mutations --------------------------------------------------------------

    def accept(self, session: WizardSession, fp: str) -> None:
        with session.lock:
            if fp in session.accepted_fingerprints():
                return  # idempotent: repeat accepts do not mutate
            for proposal in session.current_proposals():
                names = session.ctx.attribute_names(proposal.members)
                if fingerprint(names) == fp:
                    session.accepted.append(Group(proposal.name, proposal.members))
                    self._append(
                        session.session_id,
                        {
                            "event": "accept",
                            "fingerprint": fp,
                            "name": proposal.name,
                            "members": names,
                        },
                    )
                    return
            raise HTTPException(404, f"no current proposal with fingerprint {fp!r}")

    def reject(self, session: WizardSession, fp: str) -> None:
        with session.lock:
            if fp in session.rejected:
                return
            if fp in session.accepted_fingerprints():
                raise HTTPException(404, "fingerprint already accepted")
            for proposal in session.current_proposals():
                if fingerprint(session.ctx.attribute_names(proposal.members)) == fp:
                    session.rejected.add(fp)
                    self._append(
                        session.session_id, {"event": "reject", "fingerprint": fp}
                    )
                    return
            raise HTTPException(404, f"no current proposal with fingerprint {fp!r}")

    def add_group(self, session: WizardSession, name: str, member_names: list[str]) -> None:
        with session.lock:
            if not name or not member_names:
                raise HTTPException(400, "a group needs a name and members")
            try:
                members = session.ctx.attribute_set(member_names)
            except GenconceptError as exc:
                raise HTTPException(400, str(exc)) from None
            overlap = members & session.resolved_attributes()
            if overlap:
                raise HTTPException(
                    409,
                    "members already grouped: "
                    + ", ".join(session.ctx.attribute_names(overlap)),
                )
            taken = {g.name for g in session.accepted} | set(session.ctx.attributes)
            if name in taken:
                raise HTTPException(409, f"group name {name!r} already in use")
            session.accepted.append(Group(name, members))
            self._append(
                session.session_id,
                {
                    "event": "accept",
                    "fingerprint": fingerprint(sorted(member_names)),
                    "name": name,
                    "members": sorted(member_names),
                },
            )

    # -- views ---------------------------------------------------------------------

    def _count_or_none(self, ctx: FormalContext) -> int | None:
        try:
            return count_concepts(ctx, self.ceiling)
        except ConceptCeilingError:
            return None

    def state_json(self, session: WizardSession) -> dict:
        ctx = session.ctx
        proposals = session.current_proposals()
        resolved = session.resolved_attributes()
        items = []
        for m, attr in enumerate(ctx.attributes):
            supp = ctx.support([m])
            items.append(
                {
                    "name": attr,
                    "support": str(supp),
                    "frequent": supp.fraction >= session.minsupp,
                    "resolved": m in resolved,
                }
            )
        accepted = [
            {
                "name": g.name,
                "members": ctx.attribute_names(g.members),
                "fingerprint": fingerprint(ctx.attribute_names(g.members)),
                "support": _group_support(ctx, g.members, session.mode),
            }
            for g in session.accepted
        ]
        size_before = self._count_or_none(ctx)
        size_after_accepted = self._count_or_none(session.export_context())
        pending_groups = [Group(p.name, p.members) for p in proposals]
        size_after_all = self._count_or_none(
            generalize_attributes(ctx, session.scheme(pending_groups))
        )
        return {
            "format_version": 1,
            "id": session.session_id,
            "minsupp": str(session.minsupp),
            "mode": session.mode.value,
            "context": {
                "name": ctx.name,
                "objects": list(ctx.objects),
                "attributes": list(ctx.attributes),
            },
            "items": items,
            "accepted": accepted,
            "rejected": sorted(session.rejected),
            "proposals": [
                {
                    "fingerprint": fingerprint(ctx.attribute_names(p.members)),
                    "name": p.name,
                    "members": ctx.attribute_names(p.members),
                    "support": str(p.support),
                    "residual": p.residual,
                    "status": "pending",
                }
                for p in proposals
            ],
            "size_before": size_before,
            "size_after_accepted": size_after_accepted,
            "size_after_if_all_accepted": size_after_all,
        }


def _group_support(ctx: FormalContext, members, mode: Mode) -> str:
    """Support of a group column: union for exists, intersection for forall."""
    col = group_column(ctx, members, Mode.EXISTS if mode is Mode.EXISTS else Mode.FORALL)
    return f"{col.bit_count()}/{ctx.n_objects}"


def _parse_fraction(value, what: str) -> Fraction:
    try:
        frac = Fraction(str(value))
    except (ValueError, ZeroDivisionError, TypeError):
        raise HTTPException(400, f"{what} is not a fraction") from None
    if not 0 < frac <= 1:
        raise HTTPException(422, f"{what} must be in (0, 1]")
    return frac


def create_app(
    state_dir: str | Path | None = None,
    ceiling: int = DEFAULT_CEILING,
    static_dir: str | Path | None = None,
) -> FastAPI:
    store = SessionStore(state_dir, ceiling)
    app = FastAPI(title="genconcept wizard")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True}

    @app.post("/sessions")
    async def create_session(request: Request) -> dict:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise HTTPException(400, "body is not JSON") from None
        if not isinstance(body, dict):
            raise HTTPException(400, "body must be a JSON object")
        context_doc = body.get("context")
        if not isinstance(context_doc, dict):
            raise HTTPException(400, "missing context payload")
        fmt = context_doc.get("format")
        data = context_doc.get("data")
        if fmt not in ("cxt", "csv") or not isinstance(data, str):
            raise HTTPException(400, "context payload needs format cxt|csv and data")
        try:
            ctx = ctx_io.read_cxt(data) if fmt == "cxt" else ctx_io.read_csv_context(data)
            ctx._require_derivable()
        except GenconceptError as exc:
            raise HTTPException(400, str(exc)) from None
        minsupp = _parse_fraction(body.get("minsupp"), "minsupp")
        mode_raw = body.get("mode", Mode.EXISTS.value)
        if mode_raw not in (Mode.EXISTS.value, Mode.FORALL.value):
            raise HTTPException(400, f"mode must be exists or forall, got {mode_raw!r}")
        session = store.create(ctx, minsupp, Mode(mode_raw))
        return store.state_json(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return store.state_json(store.get(session_id))

    @app.post("/sessions/{session_id}/proposals/{fp}/accept")
    def accept(session_id: str, fp: str) -> dict:
        session = store.get(session_id)
        store.accept(session, fp)
        return store.state_json(session)

    @app.post("/sessions/{session_id}/proposals/{fp}/reject")
    def reject(session_id: str, fp: str) -> dict:
        session = store.get(session_id)
        store.reject(session, fp)
        return store.state_json(session)

    @app.post("/sessions/{session_id}/groups")
    async def add_group(session_id: str, request: Request) -> dict:
        session = store.get(session_id)
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise HTTPException(400, "body is not JSON") from None
        if not isinstance(body, dict):
            raise HTTPException(400, "body must be a JSON object")
        members = body.get("members")
        if not isinstance(members, list):
            raise HTTPException(400, "members must be a list of attribute names")
        store.add_group(session, body.get("name", ""), members)
        return store.state_json(session)

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str, format: str = "cxt"):
        session = store.get(session_id)
        exported = session.export_context()
        if format == "cxt":
            return Response(ctx_io.write_cxt(exported), media_type="text/plain")
        if format == "json":
            return ctx_io.context_to_json(exported)
        raise HTTPException(400, f"unknown export format {format!r}")

    @app.get("/sessions/{session_id}/lattice")
    def lattice_view(session_id: str, which: str = "before") -> dict:
        session = store.get(session_id)
        if which == "before":
            ctx = session.ctx
        elif which == "after":
            ctx = session.export_context()
        else:
            raise HTTPException(400, "which must be before or after")
        try:
            lat = enumerate_concepts(ctx, store.ceiling)
        except ConceptCeilingError as exc:
            raise HTTPException(503, str(exc)) from None
        return {
            "format_version": 1,
            "which": which,
            "concepts": [
                {
                    "extent": ctx.object_names(c.extent),
                    "intent": ctx.attribute_names(c.intent),
                }
                for c in lat.concepts
            ],
            "covers": [list(e) for e in lat.covers],
        }

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> Response:
        store.get(session_id)
        store.delete(session_id)
        return Response(status_code=204)

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def resolve_listen(listen: str | None) -> tuple[str, int]:
    value = listen or os.environ.get(LISTEN_ENV) or DEFAULT_LISTEN
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise GenconceptError(f"listen address must be host:port, got {value!r}")
    return host, int(port)


def run_server(
    listen: str | None = None,
    state_dir: str | Path | None = None,
    ceiling: int = DEFAULT_CEILING,
    static_dir: str | Path | None = None,
) -> None:
    import uvicorn

    host, port = resolve_listen(listen)
    app = create_app(state_dir, ceiling, static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
