"""
Subcommands. Each takes the parsed arguments and the loaded AppConfig, writes
its result to the output stream and returns the exit code.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

from core.data.schemas.geometry.curve_schema import body_from_schema, curve_to_dict, parse_curve_json
from core.data.schemas.harness.scenario_schema import ScenarioSchema
from core.data.schemas.harness.suite_schema import SuiteConfig
from core.data.schemas.render.scene_schema import SceneSchema
from core.errors import InvalidParameter
from core.geometry.constant_width import as_curve, complete_to_constant_width, is_constant_width
from core.geometry.curves import contains_curve, diameter, hausdorff_distance
from core.geometry.pseudometric import exact_if_possible, pdist_estimate, pper_estimate
from core.geometry.quadrature import QuadratureSpec
from core.render.figures import triangle_scene
from core.render.svg_render import render_scene
from core.services.scenario_service import generate
from core.services.verification_service import run_suite, verify_scenario, write_jsonl
from core.utils.config import AppConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def format_number(x: float) -> str:
    """12 significant digits, always with a decimal point."""
    s = format(float(x), '.12g')
    if any(c in s for c in 'ni'):
        return s
    if 'e' in s:
        mantissa, exponent = s.split('e')
        return f"{mantissa if '.' in mantissa else mantissa + '.0'}e{exponent}"
    return s if '.' in s else s + '.0'


def quadrature_from(args, config: AppConfig) -> QuadratureSpec:
    q = config.quadrature
    return QuadratureSpec(
        method=getattr(args, 'quad_method', None) or q.method,
        abs_tol=getattr(args, 'abs_tol', None) or q.abs_tol,
        max_subdivisions=q.max_subdivisions,
        grid_size=getattr(args, 'grid', None) or q.grid_size,
    )


def _read_curve(path: str):
    return body_from_schema(parse_curve_json(Path(path).read_text(encoding='utf-8')))


def _functional(args, config: AppConfig, out: TextIO, estimate) -> int:
    a, b = _read_curve(args.first), _read_curve(args.second)
    q = quadrature_from(args, config)
    if getattr(args, 'quad_method', None) is None:
        q = exact_if_possible(q, a, b)
    result = estimate(a, b, q, args.half_range)
    out.write(format_number(result.value) + '\n')
    print(f"error estimate {format_number(result.error)} ({q.method}, {result.panels} panels)", file=sys.stderr)
    return EXIT_OK


def cmd_pdist(args, config: AppConfig, out: TextIO) -> int:
    return _functional(args, config, out, pdist_estimate)


def cmd_pper(args, config: AppConfig, out: TextIO) -> int:
    """pper of the second curve relative to the first (the reference D)."""
    return _functional(args, config, out, pper_estimate)


def suite_config_from(args, config: AppConfig, data: Optional[dict]) -> SuiteConfig:
    suite = SuiteConfig.model_validate(data) if data is not None else SuiteConfig.from_app_config(config)
    overrides = {}
    if getattr(args, 'seed', None) is not None:
        overrides['seed'] = args.seed
    if getattr(args, 'workers', None) is not None:
        overrides['workers'] = args.workers
    if getattr(args, 'quad_method', None) is not None:
        overrides['quad_method'] = args.quad_method
    if getattr(args, 'abs_tol', None) is not None:
        overrides['abs_tol'] = args.abs_tol
    if getattr(args, 'grid', None) is not None:
        overrides['grid_size'] = args.grid
    return SuiteConfig.model_validate({**suite.model_dump(), **overrides}) if overrides else suite


def cmd_verify(args, config: AppConfig, out: TextIO) -> int:
    """Suite config or generated scenario in, JSON-lines reports out."""
    data = json.loads(Path(args.input).read_text(encoding='utf-8')) if args.input else None
    if isinstance(data, dict) and 'payload' in data:
        scenario = ScenarioSchema.model_validate(data)
        suite = suite_config_from(args, config, None)
        result = verify_scenario(scenario, suite)
    else:
        suite = suite_config_from(args, config, data)
        result = run_suite(suite)
    write_jsonl(result, out, suite.include_timing)
    if result.failures:
        logger.error("%d of %d checks failed", result.failures, len(result.reports))
        return EXIT_FAILURES
    return EXIT_OK


def cmd_complete(args, config: AppConfig, out: TextIO) -> int:
    """Completion JSON on the output, its validation summary on stderr."""
    curve = as_curve(_read_curve(args.input))
    c = config.completion
    body = complete_to_constant_width(curve, tolerance=c.tolerance, max_iterations=c.max_iterations)
    report = is_constant_width(body)
    summary = {
        'width': body.width,
        'width_deficit': report.max_deficit,
        'diameter_error': abs(diameter(body.curve) - diameter(curve)),
        'contains_input': contains_curve(body.curve, curve, tol=c.tolerance),
        'hausdorff_to_input': hausdorff_distance(body.curve, curve),
    }
    out.write(json.dumps(curve_to_dict(body), sort_keys=True) + '\n')
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def _params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition('=')
        if not sep or not key:
            raise InvalidParameter(f"expected key=value, got {pair!r}")
        try:
            params[key] = int(value)
        except ValueError:
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return params


def cmd_gen(args, config: AppConfig, out: TextIO) -> int:
    seed = args.seed if getattr(args, 'seed', None) is not None else config.harness.seed
    scenario = generate(args.kind, seed, _params(args.param))
    out.write(scenario.to_json() + '\n')
    return EXIT_OK


def cmd_render(args, config: AppConfig, out: TextIO) -> int:
    if args.triangle:
        scene = triangle_scene()
    elif args.input:
        scene = SceneSchema.model_validate_json(Path(args.input).read_text(encoding='utf-8'))
    else:
        raise InvalidParameter("render needs a scene file or --triangle")
    out.write(render_scene(scene, config.render))
    out.write('\n')
    return EXIT_OK


COMMANDS = {
    'pdist': cmd_pdist,
    'pper': cmd_pper,
    'verify': cmd_verify,
    'complete': cmd_complete,
    'gen': cmd_gen,
    'render': cmd_render,
}
