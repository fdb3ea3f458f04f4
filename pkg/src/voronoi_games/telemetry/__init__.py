"""Telemetry module for OpenTelemetry tracing."""

from .otel import init_tracing, shutdown_tracing

__all__ = ["init_tracing", "shutdown_tracing"]
