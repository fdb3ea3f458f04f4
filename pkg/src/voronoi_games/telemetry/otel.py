"""OpenTelemetry tracing setup for the voronoi-games harness.

Library modules create spans through ``trace.get_tracer(__name__)``; they
stay no-ops until a CLI run calls :func:`init_tracing`.
"""

import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
from opentelemetry.sdk.resources import Resource

from voronoi_games.config.settings import settings

SERVICE_NAME = "voronoi-games"

# Global flag to track if tracing has been initialized
_tracing_initialized = False


def init_tracing(
    output_file: Optional[str] = None,
    enable_console: bool = False
) -> trace.Tracer:
    """
    Initialize OpenTelemetry tracing with file and/or console output.

    Sets up a TracerProvider with a ``service.name`` resource, a file
    exporter writing spans to a timestamped file under the traces
    directory, and optionally a console exporter. Idempotent.

    Args:
        output_file: Path to write traces to. If None, a timestamped file is
                    created under settings.traces_dir
                    (e.g., traces/trace_20261019_143022.jsonl).
        enable_console: Whether to also write spans to stderr. Default False.

    Returns:
        trace.Tracer: A tracer instance for the voronoi-games service
    """
    global _tracing_initialized

    if _tracing_initialized:
        return trace.get_tracer(SERVICE_NAME)

    resource = Resource.create({"service.name": SERVICE_NAME})
    provider = TracerProvider(resource=resource)

    if output_file is None:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        traces_dir = settings.traces_dir
        traces_dir.mkdir(parents=True, exist_ok=True)
        file_path = traces_dir / f"trace_{timestamp}.jsonl"
    else:
        file_path = Path(output_file)
        file_path.parent.mkdir(parents=True, exist_ok=True)

    # Keep the handle open for the lifetime of the provider
    file_handle = open(file_path, "w", encoding="utf-8")
    file_exporter = ConsoleSpanExporter(out=file_handle)
    provider.add_span_processor(BatchSpanProcessor(file_exporter))
    print(f"✓ Traces will be written to: {file_path.absolute()}", file=sys.stderr)

    if enable_console:
        console_exporter = ConsoleSpanExporter(out=sys.stderr)
        provider.add_span_processor(BatchSpanProcessor(console_exporter))
        print("✓ Traces will also be written to console", file=sys.stderr)

    trace.set_tracer_provider(provider)
    _tracing_initialized = True

    return trace.get_tracer(SERVICE_NAME)


def shutdown_tracing() -> None:
    """Flush pending spans; safe to call when tracing was never initialized."""
    provider = trace.get_tracer_provider()
    if isinstance(provider, TracerProvider):
        provider.force_flush()
