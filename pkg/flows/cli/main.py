"""
Linha de comando: uma requisição por processo, um registro JSON canônico no
stdout (logs vão para o stderr).

Códigos de saída:
    0 sucesso
    1 suíte de oráculos com divergência
    2 entrada inválida
    3 hipóteses do lema violadas
    4 falha de construção / cadeia inválida / erro interno
    5 orçamento de enumeração excedido

Exemplo:
    python -m flows.cli.main sb-bound --payload '{"ind": 30, "flags": [6]}'
    python -m flows.cli.main chain --payload-file fixtures/chain_p2_m2_k1.json
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from sympy import factorint

from flows.brauer.csa import AlgebraDescriptor, primary_decompose
from flows.brauer.global_brauer import (
    construct_extension_lemma,
    construct_power_extension,
    global_index,
    global_period,
    global_restrict,
    validate_class,
)
from flows.brauer.local_brauer import catalog_degree_p_extensions, catalog_size, count_degree_p_extensions
from flows.brauer.schemas import class_record
from flows.cli.schemas import (
    COMMANDS,
    SCHEMA_VERSION,
    ChainFixture,
    LemmaPayload,
    LocalCountPayload,
    PowerPayload,
    Request,
    RestrictPayload,
    SBPayload,
)
from flows.oracle.checks import check_chain_record, oracle_index
from flows.oracle.schemas import EnumerationBudget
from flows.oracle.suite import run_oracle_suite
from flows.severi_brauer.equiv_chain import NodeRegistry, build_chain, chain_from_record, validate_chain
from flows.severi_brauer.sb_calculus import generic_index, has_rational_point, normal_form, torsion_bound, variety_index
from shared.config import Settings, load_settings
from shared.decorators import run_summary
from shared.errors import BudgetError, ConsistencyError, InputError, SBFlagError
from shared.utils import canonical_json, get_logger, parse_model


class CommandResult:
    """Registro de saída e código de saída de um comando."""

    def __init__(self, record: Dict[str, Any], exit_code: int = 0, table: Any = None):
        self.record = record
        self.exit_code = exit_code
        self.table = table


Handler = Callable[[Any, Request, Settings], CommandResult]


def _class_index(payload, request, settings) -> CommandResult:
    c = validate_class(payload)
    index = global_index(c)
    record = {"index": index, "period": global_period(c)}
    if index <= settings.max_index:
        record["oracle_index"] = oracle_index(c, EnumerationBudget.from_settings(settings))
    return CommandResult(record)


def _class_decompose(payload, request, settings) -> CommandResult:
    c = validate_class(payload)
    components = primary_decompose(AlgebraDescriptor(kind="global", brauer_data=c))
    return CommandResult({
        "index": global_index(c),
        "components": [
            {
                "prime": min(factorint(item.index)),
                "index": item.index,
                "period": item.exponent,
                "class": class_record(item.brauer_data),
            }
            for item in components
        ],
    })


def _class_restrict(payload, request, settings) -> CommandResult:
    data = parse_model(RestrictPayload, payload, "payload")
    restricted = global_restrict(data.brauer_class, data.extension)
    return CommandResult({
        "class": class_record(restricted),
        "index": global_index(restricted),
        "original_index": global_index(data.brauer_class),
    })


def _sb_payload(payload, request: Request) -> SBPayload:
    data = parse_model(SBPayload, payload, "payload")
    if request.hypotheses:
        data = data.model_copy(update={"hypotheses": tuple(data.hypotheses) + tuple(request.hypotheses)})
    return data


def _sb_index(payload, request, settings) -> CommandResult:
    X = _sb_payload(payload, request).to_descriptor()
    return CommandResult({
        "generic_index": generic_index(X),
        "variety_index": variety_index(X),
        "normal_form": normal_form(X).to_record(),
    })


def _sb_generic_index(payload, request, settings) -> CommandResult:
    X = _sb_payload(payload, request).to_descriptor()
    return CommandResult({"generic_index": generic_index(X)})


def _sb_bound(payload, request, settings) -> CommandResult:
    data = _sb_payload(payload, request)
    X = data.to_descriptor()
    field_kind = data.field_kind
    if field_kind is None and X.algebra.base_kind == "abstract":
        field_kind = settings.default_field_kind
    bound = torsion_bound(X, field_kind, data.hypotheses)
    return CommandResult({"generic_index": generic_index(X), **bound.to_record()})


def _sb_rational_point(payload, request, settings) -> CommandResult:
    data = _sb_payload(payload, request)
    if data.ind_over_L is None:
        raise InputError("invalid-payload", "sb-rational-point exige 'ind_over_L'")
    X = data.to_descriptor()
    return CommandResult({
        "generic_index": generic_index(X),
        "ind_over_L": data.ind_over_L,
        "has_rational_point": has_rational_point(X, data.ind_over_L),
    })


def _local_ext_count(payload, request, settings) -> CommandResult:
    data = parse_model(LocalCountPayload, payload, "payload")
    count = count_degree_p_extensions(data.descriptor, data.p)
    size = data.catalog if data.catalog is not None else catalog_size(data.descriptor, data.p)
    labels = catalog_degree_p_extensions(data.descriptor, data.p, size)
    return CommandResult({**count.model_dump(), "catalog": [str(label) for label in labels]})


def _construct_ext(payload, request, settings) -> CommandResult:
    data = parse_model(LemmaPayload, payload, "payload")
    result = construct_extension_lemma(data.brauer_class, data.L0, data.L1, allow_coincident=data.allow_coincident)
    return CommandResult(result.to_record())


def _construct_power_ext(payload, request, settings) -> CommandResult:
    data = parse_model(PowerPayload, payload, "payload")
    K = construct_power_extension(data.brauer_class, data.k)
    return CommandResult({
        "extension": K.to_record(),
        "index": global_index(global_restrict(data.brauer_class, K)),
    })


def _chain(payload, request, settings) -> CommandResult:
    fixture = parse_model(ChainFixture, payload, "payload")
    D = fixture.to_algebra()
    registry = NodeRegistry.from_algebra(D)
    for node in fixture.nodes:
        registry.add_extension(node.parent, node.extension, node_id=node.id)
    chain = build_chain(D, fixture.k, registry[fixture.left], registry[fixture.right], registry)
    return CommandResult(chain.to_record())


def _verify_chain(payload, request, settings) -> CommandResult:
    if not isinstance(payload, dict):
        raise InputError("invalid-payload", "verify-chain espera o registro produzido por 'chain'")
    problems = check_chain_record(payload) + validate_chain(chain_from_record(payload))
    record = {
        "valid": not problems,
        "problems": sorted(set(problems)),
        "certificates": len(payload.get("certificates", [])),
    }
    return CommandResult(record, exit_code=0 if not problems else ConsistencyError.exit_code)


def _oracle_suite(payload, request, settings) -> CommandResult:
    report = run_oracle_suite(EnumerationBudget.from_settings(settings))
    return CommandResult(report.to_record(), exit_code=report.exit_code, table=report.to_frame())


HANDLERS: Dict[str, Handler] = {
    "class-index": _class_index,
    "class-decompose": _class_decompose,
    "class-restrict": _class_restrict,
    "sb-index": _sb_index,
    "sb-generic-index": _sb_generic_index,
    "sb-bound": _sb_bound,
    "sb-rational-point": _sb_rational_point,
    "local-ext-count": _local_ext_count,
    "construct-ext": _construct_ext,
    "construct-power-ext": _construct_power_ext,
    "chain": _chain,
    "verify-chain": _verify_chain,
    "oracle-suite": _oracle_suite,
}


class RecordParser(argparse.ArgumentParser):
    """Erros de uso viram InputError e saem como registro no stdout, como os demais."""

    def error(self, message: str):
        raise InputError("invalid-arguments", f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = RecordParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--payload", help="Payload JSON da operação.")
    source.add_argument("--payload-file", help="Arquivo com o payload JSON.")
    common.add_argument("--config", help="Arquivo .env de configuração (senão SBFLAG_CONFIG).")
    common.add_argument("--hypothesis", action="append", default=[], help="Hipótese condicional (repetível).")
    common.add_argument("--human", action="store_true", help="Saída legível em vez do JSON canônico.")
    common.add_argument("--max-places", type=int)
    common.add_argument("--max-denominator", type=int)
    common.add_argument("--max-degree", type=int)
    common.add_argument("--max-index", type=int)
    common.add_argument("--max-lemma-pairs", type=int, help="Trunca os pares (L0, L1) das suítes do lema e das cadeias.")

    parser = RecordParser(prog="sbflag", description="Calculadora de Brauer / Severi–Brauer com oráculos.")
    commands = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        commands.add_parser(command, parents=[common])
    return parser


def _read_payload(args: argparse.Namespace) -> Any:
    try:
        if args.payload_file:
            return json.loads(Path(args.payload_file).read_text(encoding="utf-8"))
        if args.payload:
            return json.loads(args.payload)
    except OSError as e:
        raise InputError("invalid-payload", f"não foi possível ler {args.payload_file}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError("invalid-payload", f"JSON inválido: {e.msg} (linha {e.lineno})") from e
    return None


def render(result: CommandResult, human: bool) -> str:
    if not human:
        return canonical_json(result.record)
    if result.table is not None:
        return result.table.to_string(index=False)
    return json.dumps(result.record, indent=2, sort_keys=True, ensure_ascii=False)


@run_summary(name="sbflag", extract_summary=lambda code: {"exit_code": code})
def run(argv: Optional[List[str]] = None) -> int:
    """Executa uma requisição e escreve o registro no stdout; retorna o código de saída."""
    logger = get_logger("cli")
    header: Dict[str, Any] = {"schema_version": SCHEMA_VERSION}

    try:
        args = build_parser().parse_args(argv)
        header["command"] = args.command
        settings = load_settings(args.config, {
            "max_places": args.max_places,
            "max_denominator": args.max_denominator,
            "max_degree": args.max_degree,
            "max_index": args.max_index,
            "max_lemma_pairs": args.max_lemma_pairs,
        })
        request = Request(command=args.command, payload=_read_payload(args), hypotheses=tuple(args.hypothesis))
        human = args.human or settings.output == "human"
        result = HANDLERS[request.command](request.payload, request, settings)
    except BudgetError as e:
        logger.warning(f"⚠️ {e}")
        print(canonical_json({**header, **e.to_record()}))
        return e.exit_code
    except SBFlagError as e:
        logger.error(f"❌ {e}")
        print(canonical_json({**header, **e.to_record()}))
        return e.exit_code
    except Exception as e:
        logger.error(f"❌ Erro interno: {type(e).__name__}: {e}")
        print(canonical_json({**header, "error": "internal-error", "message": str(e)}))
        return ConsistencyError.exit_code

    print(render(CommandResult({**header, **result.record}, result.exit_code, result.table), human))
    return result.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
