"""Command result normalizers."""

import json
from dataclasses import asdict, dataclass, field, is_dataclass
from typing import Any, Dict, List

import jinja2
import pandas as pd
from dataclasses_json import dataclass_json


def fmt_float(value: float, digits: int = 2) -> str:
    """Fixed-point number for templates."""
    return f"{value:.{digits}f}"


def template_environment() -> jinja2.Environment:
    """Jinja environment over the packaged templates."""
    jinja_env = jinja2.Environment(
        loader=jinja2.PackageLoader("advbench", "templates"),
        autoescape=jinja2.select_autoescape(["html", "xml"]),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    jinja_env.filters["fmt_float"] = fmt_float
    return jinja_env


def render_template(template_name: str, **context) -> str:
    return template_environment().get_template(template_name).render(**context)


def _plain(item: Any) -> Any:
    if is_dataclass(item):
        return asdict(item)
    return item


@dataclass_json
@dataclass
class AdvbenchResultsNormalizer:
    """Advbench command results."""

    service: str
    raw_results: List[Any] = field(default_factory=list)
    arguments: Dict[str, Any] = field(default_factory=dict)

    @property
    def results(self) -> List[Dict[str, Any]]:
        """Results."""
        return [_plain(r) for r in self.raw_results]

    def render(self) -> str:
        """Text printed by the command line."""
        return json.dumps(self.results, indent=2, default=str)


@dataclass_json
@dataclass
class AdvbenchResult(AdvbenchResultsNormalizer):
    """Single result normalizer."""

    raw_results: Any = field(default=None)

    @property
    def results(self) -> List[Dict[str, Any]]:
        return [_plain(self.raw_results)]


@dataclass_json
@dataclass
class DataFrameNormalizer(AdvbenchResultsNormalizer):
    raw_results: pd.DataFrame = field(default_factory=pd.DataFrame)

    @property
    def results(self) -> List[Dict[str, Any]]:
        return self.raw_results.to_dict(orient="records")

    def render(self) -> str:
        return self.raw_results.to_string(index=False)
