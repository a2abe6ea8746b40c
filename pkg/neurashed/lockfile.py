import contextlib
import logging
import os
import signal
import sys
from collections.abc import Iterator
from pathlib import Path
from typing import Any

from neurashed.config import lock_file_for
from neurashed.errors import OutputLocked

logger = logging.getLogger(__name__)

HANDLED_SIGNALS = (signal.SIGINT, signal.SIGTERM)


def acquire_lock(*, lock_file: Path) -> bool:
    """Acquire a PID lock file. Returns True if lock acquired."""
    if lock_file.exists():
        try:
            owner = int(lock_file.read_text(encoding="utf-8").strip())
            os.kill(owner, 0)
            logger.error(f"Output directory is in use by PID {owner}")
            return False
        except (ValueError, ProcessLookupError):
            logger.warning(f"Removing stale lock file {lock_file}")
        except PermissionError:
            logger.error(f"Lock file {lock_file} is held by a running process")
            return False

    lock_file.parent.mkdir(parents=True, exist_ok=True)
    lock_file.write_text(str(os.getpid()), encoding="utf-8")
    return True


def release_lock(*, lock_file: Path) -> None:
    """Delete the lock file, ignoring errors."""
    with contextlib.suppress(OSError):
        lock_file.unlink()


def setup_signal_handlers(*, lock_file: Path) -> dict[int, Any]:
    """Register SIGINT/SIGTERM handlers that release the lock and exit.

    Returns the handlers they replace so the caller can restore them.
    """

    def _handler(signum: int, _frame: object) -> None:
        logger.info(f"Received signal {signum}, aborting run")
        release_lock(lock_file=lock_file)
        sys.exit(1)

    return {sig: signal.signal(sig, _handler) for sig in HANDLED_SIGNALS}


def restore_signal_handlers(previous: dict[int, Any]) -> None:
    for sig, handler in previous.items():
        signal.signal(sig, handler)


@contextlib.contextmanager
def locked_output(*, out_dir: Path) -> Iterator[Path]:
    """Hold the lock for ``out_dir`` while a run writes into it.

    The signal handlers that release the lock are only installed once this
    process owns it, and are swapped back out on exit.
    """
    lock_file = lock_file_for(out_dir=out_dir)
    if not acquire_lock(lock_file=lock_file):
        raise OutputLocked(f"{out_dir} is being written by another process")
    previous = setup_signal_handlers(lock_file=lock_file)
    try:
        yield lock_file
    finally:
        restore_signal_handlers(previous)
        release_lock(lock_file=lock_file)
