"""Programmer-facing core operators: state, neighbor exchange, branching.

Aggregate programs are ordinary Python functions built from three operators:

* ``remember`` evolves state across rounds and returns a setter plus the
  current value, keeping reads and updates explicit;
* ``neighbors`` shares a value with aligned neighbors and returns their
  values as a `NeighborhoodField`;
* ``branch`` evaluates one of two thunks inside a branch scope, so only
  devices that took the same side exchange values within it.

Wrapping a function with ``@aggregate`` gives every call its own function
token, which is what lets two devices recognize they are at the same program
point.  The active engine lives in a context variable so independent rounds
can run on separate threads or tasks.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from functools import wraps
from typing import Any, Callable

from .engine import (
    KIND_BRANCH_LEFT,
    KIND_BRANCH_RIGHT,
    KIND_FUNCTION,
    KIND_OPERATOR,
    Engine,
)
from .errors import UsageError
from .fields import NeighborhoodField

engine_var: ContextVar[Engine] = ContextVar("fieldcast_engine")


def current_engine() -> Engine:
    try:
        return engine_var.get()
    except LookupError:
        raise UsageError("no engine active in this context") from None


@contextmanager
def activate(engine: Engine):
    """Make ``engine`` the current one for the duration of a block."""
    token = engine_var.set(engine)
    try:
        yield engine
    finally:
        engine_var.reset(token)


@contextmanager
def _scope(engine: Engine, kind: str, name: str | None = None):
    engine.enter(kind, name)
    depth = engine.depth
    try:
        yield
    finally:
        # Restore balance even when the body leaked enters before failing.
        engine.unwind_to(depth)
        engine.exit()


class StateHandle:
    """Setter for one state slot; calling it stages the next-round value.

    ``current`` is the slot's round-start value: staged writes only become
    visible next round, and lazy transmission always ships the round-start
    value.
    """

    __slots__ = ("_engine", "path")

    def __init__(self, engine: Engine, path):
        self._engine = engine
        self.path = path

    def __call__(self, value: Any) -> None:
        self._engine.set_slot(self.path, value)

    set = __call__

    @property
    def current(self) -> Any:
        return self._engine.slot_value(self.path)

    def __repr__(self) -> str:
        return f"StateHandle(path={self.path!r})"


def remember(initial: Any) -> tuple[StateHandle, Any]:
    """State that survives rounds: returns (setter, current value).

    The first round yields ``initial``; afterwards the value set in the
    previous round (or the old value, carried forward, if the setter was
    never called).  At most one write takes effect per round, the last one.
    """
    engine = current_engine()
    with _scope(engine, KIND_OPERATOR, "remember"):
        value, path = engine.write_slot(initial)
    return StateHandle(engine, path), value


def neighbors(value: Any) -> NeighborhoodField:
    """Share ``value`` with aligned neighbors; returns their shared values.

    The local device is always part of the returned field, mapped to the
    value sent this round.  Passing a `StateHandle` shares the slot's
    round-start value lazily: while it is unchanged the export carries an
    unchanged-marker instead of the value.
    """
    engine = current_engine()
    lazy = isinstance(value, StateHandle)
    payload = value.current if lazy else value
    with _scope(engine, KIND_OPERATOR, "neighbors"):
        engine.send(payload, lazy=lazy)
        return engine.neighbor_values()


def share(initial: Any, update: Callable[[NeighborhoodField], Any]) -> Any:
    """Evolve a value against the neighborhood and share the result at once.

    ``update`` receives the field of the values every aligned device shared
    here in its latest round -- including this device's own previous value
    (``initial`` on the first round) -- and returns the new value, which is
    immediately shared.  Because the updated value is what travels,
    information advances one hop per round; the building-block library is
    built on this.  Transmission is lazy: an unchanged value degrades to an
    unchanged-marker on the wire.
    """
    engine = current_engine()
    with _scope(engine, KIND_OPERATOR, "share"):
        field = engine.receive(initial)
        value = update(field)
        engine.send(value, lazy=True)
    return value


def branch(condition: bool, then: Callable[[], Any], otherwise: Callable[[], Any]) -> Any:
    """Evaluate exactly one thunk inside a branch scope.

    Devices that evaluated opposite conditions are misaligned inside the
    branch (their fields there contain only same-side devices) and realign
    as soon as the branch returns.
    """
    engine = current_engine()
    kind = KIND_BRANCH_LEFT if condition else KIND_BRANCH_RIGHT
    with _scope(engine, kind):
        return then() if condition else otherwise()


def aggregate_call(name: str, body: Callable[[], Any]) -> Any:
    """Run ``body`` inside a function scope named ``name``."""
    engine = current_engine()
    with _scope(engine, KIND_FUNCTION, name):
        return body()


def aggregate(fn: Callable) -> Callable:
    """Decorator giving a function its own alignment scope per call."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        engine = current_engine()
        with _scope(engine, KIND_FUNCTION, fn.__name__):
            return fn(*args, **kwargs)

    wrapper.__wrapped__ = fn
    return wrapper
