import json
from pathlib import Path
from typing import Any, Optional, Tuple

from loguru import logger
from pydantic import TypeAdapter, ValidationError

from haar_affine.chaos.chaos1 import Chaos1
from haar_affine.config import settings
from haar_affine.dyadic.scalars import Scalar, parse_scalar
from haar_affine.dyadic.stepfn import DyadicStep, check_step_level
from haar_affine.exceptions import InputParseError
from haar_affine.models import ScalarMode, StepFunctionSpec, SymbolKind, SymbolSpec
from haar_affine.symbol.generators import symbol_from_spec

_SYMBOL_ADAPTER = TypeAdapter(SymbolSpec)


class InputService:
    """Parse scalars, step functions and symbol documents given inline or as file paths."""

    def __init__(self, mode: Optional[ScalarMode] = None):
        self.mode = ScalarMode(mode or settings.mode)

    def read_source(self, source: str) -> str:
        """Inline JSON is returned as is; anything else is read as a file path."""
        text = source.strip()
        if text.startswith(("{", "[")):
            return text
        path = Path(source)
        if not path.is_file():
            logger.error(f"Input file not found: {source}")
            raise InputParseError(f"Input file not found: {source}")
        logger.debug(f"Reading input from {path}")
        return path.read_text()

    def load_json(self, source: str) -> Any:
        try:
            return json.loads(self.read_source(source))
        except json.JSONDecodeError as e:
            logger.error(f"Malformed JSON at position {e.pos}: {e.msg}")
            raise InputParseError(f"Malformed JSON: {e.msg}", e.pos)

    def parse_scalar(self, text: str) -> Scalar:
        return parse_scalar(text, self.mode)

    def parse_step(self, source: str) -> DyadicStep:
        """{"level": m, "values": [...]} with 2^m scalar strings."""
        try:
            spec = StepFunctionSpec.model_validate(self.load_json(source))
        except ValidationError as e:
            logger.error(f"Invalid step function document: {str(e)}")
            raise InputParseError(f"Invalid step function document: {e.errors()[0]['msg']}")
        check_step_level(spec.level)
        try:
            values = [self.parse_scalar(v) for v in spec.values]
        except InputParseError as e:
            logger.error(f"Bad value in step function document: {str(e)}")
            raise
        return DyadicStep.from_values(values, self.mode)

    def parse_symbol_spec(self, source: str):
        try:
            return _SYMBOL_ADAPTER.validate_python(self.load_json(source))
        except ValidationError as e:
            logger.error(f"Invalid symbol document: {str(e)}")
            raise InputParseError(f"Invalid symbol document: {e.errors()[0]['msg']}")

    def parse_symbol(self, source: str, N: Optional[int] = None) -> Tuple[Chaos1, Any]:
        """Build the chaos-1 function of a symbol document through degree N."""
        N = settings.trunc if N is None else N
        spec = self.parse_symbol_spec(source)
        try:
            series = symbol_from_spec(spec, N, self.mode)
        except Exception as e:
            logger.error(f"Error building {spec.kind} symbol: {str(e)}")
            raise
        logger.info(f"Parsed {spec.kind} symbol in {self.mode.value} mode through degree {series.degree}")
        return Chaos1.from_series(series, SymbolKind(spec.kind)), spec
