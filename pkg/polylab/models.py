"""Database models for the check-run archive."""

from __future__ import annotations

import json
from contextlib import contextmanager
from typing import Iterable, Iterator, Optional

from sqlalchemy import (
    Boolean,
    Column,
    DateTime,
    Float,
    ForeignKey,
    Integer,
    String,
    Text,
    create_engine,
    func,
    select,
)
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, relationship, selectinload, sessionmaker
from sqlalchemy.pool import StaticPool

from .reports import CheckReport

Base = declarative_base()


class CheckRun(Base):
    """One invocation of ``check`` that was archived."""

    __tablename__ = "check_runs"

    id = Column(Integer, primary_key=True)
    config_name = Column(String(40), nullable=False)
    master_seed = Column(Integer, nullable=False)
    engine_version = Column(String(40), nullable=False)
    created_at = Column(DateTime, nullable=False, server_default=func.now())

    records = relationship(
        "CheckRecord",
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="CheckRecord.id",
    )

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def __repr__(self) -> str:  # pragma: no cover - repr for debugging
        return f"<CheckRun {self.id} seed={self.master_seed}>"


class CheckRecord(Base):
    """A single archived :class:`~polylab.reports.CheckReport`."""

    __tablename__ = "check_records"

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("check_runs.id"), nullable=False)
    check_name = Column(String(80), nullable=False)
    params = Column(Text, nullable=False)
    max_abs_residual = Column(Float, nullable=True)
    passed = Column(Boolean, default=False, nullable=False)
    reason = Column(Text, nullable=True)
    created_at = Column(DateTime, nullable=False, server_default=func.now())

    run = relationship("CheckRun", back_populates="records")

    @classmethod
    def from_report(cls, report: CheckReport) -> "CheckRecord":
        payload = report.to_dict()
        residual = payload["max_abs_residual"]
        return cls(
            check_name=report.check,
            params=json.dumps(payload["params"], sort_keys=True),
            max_abs_residual=residual if isinstance(residual, float) else None,
            passed=bool(report.passed),
            reason=report.reason,
        )

    def __repr__(self) -> str:  # pragma: no cover - repr for debugging
        return f"<CheckRecord {self.check_name!r} passed={self.passed}>"


class ReportStore:
    """Engine and session factory for the archive, bound late like an extension."""

    def __init__(self) -> None:
        self.engine: Optional[Engine] = None
        self._session_factory: Optional[sessionmaker] = None

    def init_app(self, config) -> None:
        url = config.DATABASE_URL
        options = {}
        if url.startswith("sqlite") and ":memory:" in url:
            options = {"connect_args": {"check_same_thread": False}, "poolclass": StaticPool}
        self.engine = create_engine(url, future=True, **options)
        self._session_factory = sessionmaker(bind=self.engine, expire_on_commit=False, future=True)

    def _require_engine(self) -> Engine:
        if self.engine is None:
            raise RuntimeError("report store is not initialised; call init_app first")
        return self.engine

    def create_all(self) -> None:
        Base.metadata.create_all(self._require_engine())

    @contextmanager
    def session(self) -> Iterator[Session]:
        self._require_engine()
        session = self._session_factory()
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def record_run(
        self,
        reports: Iterable[CheckReport],
        config_name: str,
        master_seed: int,
        engine_version: str,
    ) -> int:
        """Archive a batch of reports; returns the new run id."""

        with self.session() as session:
            run = CheckRun(
                config_name=config_name,
                master_seed=master_seed,
                engine_version=engine_version,
            )
            run.records = [CheckRecord.from_report(report) for report in reports]
            session.add(run)
            session.flush()
            return run.id

    def runs(self) -> list[CheckRun]:
        with self.session() as session:
            query = select(CheckRun).options(selectinload(CheckRun.records)).order_by(CheckRun.id)
            return list(session.scalars(query).all())


db = ReportStore()


__all__ = ["Base", "CheckRun", "CheckRecord", "ReportStore", "db"]
