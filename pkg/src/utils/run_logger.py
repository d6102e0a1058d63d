# File: src/utils/run_logger.py
"""
Run Logger - captures the construction's progress lines for the CLI and the dashboard

Agents report with emoji-prefixed print lines. While a run is captured,
stdout is teed into a shared log of (level, message) pairs, and an optional
callback sees every line as soon as it is complete.
"""

import io
import re
import sys
import threading
from contextlib import contextmanager
from typing import Callable, List, Optional, Tuple

LogCallback = Callable[[str, str], None]

# first match wins
LEVEL_MARKERS = (
    ("error", ("❌", "error", "failed")),
    ("warning", ("⚠️", "warning")),
    ("success", ("✅", "complete")),
    ("agent", ("🚀", "🧭", "🧱", "🔢", "🔍", "💾")),
)
STEP_PATTERN = re.compile(r"\bStep (\d+)\b")


def classify(line: str) -> str:
    lowered = line.lower()
    for level, markers in LEVEL_MARKERS:
        if any(marker in line or marker in lowered for marker in markers):
            return level
    return "info"


class _Tee:
    """Writes through to the console and hands every finished line to `sink`"""

    def __init__(self, console, sink: Callable[[str], None]):
        self._console = console
        self._sink = sink
        self._pending = ""

    def write(self, text: str) -> int:
        self._console.write(text)
        self._console.flush()
        lines = (self._pending + text).split("\n")
        self._pending = lines.pop()
        for line in lines:
            self._sink(line)
        return len(text)

    def flush(self):
        self._console.flush()
        if self._pending:
            self._sink(self._pending)
            self._pending = ""

    def __getattr__(self, name):
        return getattr(self._console, name)


class RunLogger:
    """Thread-safe run log; `current_step` follows the last 'Step N' line seen"""

    def __init__(self):
        self._entries: List[Tuple[str, str]] = []
        self._callback: Optional[LogCallback] = None
        self._guard = threading.Lock()
        self.current_step: Optional[int] = None

    def clear(self):
        with self._guard:
            self._entries.clear()
            self.current_step = None

    def set_callback(self, callback: Optional[LogCallback]):
        with self._guard:
            self._callback = callback

    def add_log(self, message: str, level: str = "info"):
        with self._guard:
            self._entries.append((level, message))
            found = STEP_PATTERN.search(message)
            if found:
                self.current_step = int(found.group(1))
            callback = self._callback
        if callback is None:
            return
        try:
            callback(level, message)
        except Exception as e:
            print(f"⚠️ log callback raised {type(e).__name__}: {e}", file=sys.__stderr__)

    def get_logs(self) -> List[Tuple[str, str]]:
        with self._guard:
            return list(self._entries)

    def _record(self, line: str):
        if line.strip():
            self.add_log(line, classify(line))

    @contextmanager
    def capture_logs(self, real_time: bool = False):
        """
        Route stdout into the log for the duration of the block.

        real_time=True keeps printing to the console and logs line by line;
        otherwise output is swallowed and logged when the block exits.
        """
        console = sys.stdout
        target = _Tee(console, self._record) if real_time else io.StringIO()
        sys.stdout = target
        try:
            yield self
        finally:
            sys.stdout = console
            if real_time:
                target.flush()
            else:
                for line in target.getvalue().splitlines():
                    self._record(line)


_logger = RunLogger()


def get_logger() -> RunLogger:
    """Global logger shared by the driver, the CLI and the dashboard"""
    return _logger
