"""
Cadeias de equivalência simples entre corpos de A(Y), Y = SB_{p^k}(D), sobre
uma base p-especial com ind(D) = p^m.

Os corpos são nós de um registro: cada nó guarda a extensão formal relativa
sobre cada pai, a classe restrita e o fecho dos subcorpos conhecidos. A
interseção L0 ∩ L1 é o subcorpo comum conhecido de maior grau.

Indução na medida ℓ = n − log_p[L0 ∩ L1 : F], n = m − k:

    ℓ = 1: o lema sobre X = L0 ∩ L1 dá K′ ∈ A(Y); cadeia L0 ~ K′ ~ L1, com
           testemunhas M_i ⊃ K′·L_i que cindem D
    ℓ > 1: subextensões L_i′ de grau p sobre X, K′ pelo lema sobre X,
           M_i ⊃ K′·L_i′ de grau p^n e índice p^k; recursão em
           (L0, M0), (M0, M1), (M1, L1)
"""

from typing import Any, Dict, List, Optional, Tuple

from sympy import factorint, isprime

from flows.brauer.csa import AlgebraDescriptor, as_field_model
from flows.brauer.global_brauer import (
    Compositum,
    construct_extension_lemma,
    construct_power_extension,
    global_index,
    global_restrict,
    prime_power_index,
)
from flows.brauer.schemas import FormalExtension, GlobalBrauerClass
from flows.severi_brauer.schemas import (
    CertificateCheck,
    EquivChain,
    FieldNode,
    SimpleEquivCertificate,
    TowerStep,
    TraceEntry,
)
from shared.errors import ConsistencyError, InputError
from shared.utils import get_logger, parse_model

BASE_ID = "F"


def _log_p(degree: int, p: int) -> int:
    factors = factorint(degree)
    if set(factors) - {p}:
        raise ConsistencyError(f"grau {degree} não é potência de {p}", {"degree": degree})
    return factors.get(p, 0)


class NodeRegistry:
    """
    Registro privado de corpos intermediários de uma construção.

    Um único escritor por registro; cada build_chain trabalha no seu.
    """

    def __init__(self, base_class: GlobalBrauerClass):
        prime_power = prime_power_index(base_class)
        self.prime: Optional[int] = prime_power[0] if prime_power else None
        self.base_class = base_class
        self._nodes: Dict[str, FieldNode] = {}
        self._relative: Dict[Tuple[str, str], FormalExtension] = {}
        self._counters: Dict[str, int] = {}
        self.base = self._register(FieldNode(
            id=BASE_ID,
            degree_over_base=1,
            subfields=(BASE_ID,),
            brauer_class=base_class,
            declared_index=global_index(base_class),
            generator=BASE_ID,
        ))

    @classmethod
    def from_algebra(cls, D: AlgebraDescriptor) -> "NodeRegistry":
        return cls(as_field_model(D))

    def __getitem__(self, node_id: str) -> FieldNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise InputError("invalid-payload", f"nó desconhecido: '{node_id}'") from None

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    @property
    def nodes(self) -> List[FieldNode]:
        return list(self._nodes.values())

    def _register(self, node: FieldNode) -> FieldNode:
        if node.id in self._nodes:
            raise InputError("invalid-payload", f"nó repetido: '{node.id}'")
        self._nodes[node.id] = node
        return node

    def _next_id(self, prefix: str) -> str:
        while True:
            self._counters[prefix] = self._counters.get(prefix, 0) + 1
            candidate = f"{prefix}{self._counters[prefix]}"
            if candidate not in self._nodes:
                return candidate

    def relative(self, child_id: str, parent_id: str) -> FormalExtension:
        try:
            return self._relative[(child_id, parent_id)]
        except KeyError:
            raise ConsistencyError(
                f"sem modelo relativo de '{child_id}' sobre '{parent_id}'",
                {"child": child_id, "parent": parent_id},
            ) from None

    def is_child(self, child_id: str, parent_id: str) -> bool:
        return (child_id, parent_id) in self._relative

    def add_extension(
        self,
        parent_id: str,
        E: FormalExtension,
        node_id: Optional[str] = None,
        prefix: str = "N",
        generator: Optional[str] = None,
    ) -> FieldNode:
        """
        Novo nó E/parent: classe restrita lugar a lugar, torre e subcorpos herdados.

        Raises:
            InputError: grau relativo 1 ou extensão incompatível (invalid-extension)
        """
        parent = self[parent_id]
        if E.degree < 2:
            raise InputError("invalid-extension", f"extensão de grau {E.degree} sobre '{parent_id}' não cria nó novo")
        node_id = node_id or self._next_id(prefix)
        restricted = global_restrict(parent.brauer_class, E)
        node = self._register(FieldNode(
            id=node_id,
            degree_over_base=parent.degree_over_base * E.degree,
            tower=parent.tower + (TowerStep(node_id=node_id, relative_degree=E.degree),),
            parents=(parent_id,),
            subfields=parent.subfields + (node_id,),
            local_model=E,
            brauer_class=restricted,
            declared_index=global_index(restricted),
            generator=generator or f"θ_{node_id}",
        ))
        self._relative[(node_id, parent_id)] = E
        return node

    def add_compositum(self, first_id: str, second_id: str, model: Compositum, prefix: str = "C") -> FieldNode:
        """Compositum first·second; a torre e a classe seguem o primeiro fator."""
        first, second = self[first_id], self[second_id]
        node_id = self._next_id(prefix)
        restricted = global_restrict(first.brauer_class, model.over_first)
        node = self._register(FieldNode(
            id=node_id,
            degree_over_base=first.degree_over_base * model.over_first.degree,
            tower=first.tower + (TowerStep(node_id=node_id, relative_degree=model.over_first.degree),),
            parents=(first_id, second_id),
            subfields=first.subfields + second.subfields + (node_id,),
            local_model=model.over_first,
            brauer_class=restricted,
            declared_index=global_index(restricted),
            generator=f"{first.generator}·{second.generator}",
        ))
        self._relative[(node_id, first_id)] = model.over_first
        self._relative[(node_id, second_id)] = model.over_second
        return node

    def power_tower(self, node: FieldNode, steps: int, prefix: str = "M") -> FieldNode:
        """`steps` passos de grau p, cada um reduzindo o índice por p."""
        for _ in range(steps):
            node = self.add_extension(node.id, construct_power_extension(node.brauer_class, 1), prefix=prefix)
        return node

    def intersection(self, first: FieldNode, second: FieldNode) -> FieldNode:
        """
        Maior subcorpo comum conhecido.

        Raises:
            ConsistencyError: dois subcorpos comuns maximais distintos
        """
        common = [self[node_id] for node_id in sorted(set(first.subfields) & set(second.subfields))]
        top = max(node.degree_over_base for node in common)
        maximal = [node for node in common if node.degree_over_base == top]
        if len(maximal) != 1:
            raise ConsistencyError(
                f"interseção ambígua de '{first.id}' e '{second.id}'",
                {"candidates": [node.id for node in maximal]},
            )
        return maximal[0]


def subextension_of_degree_p(registry: NodeRegistry, L: FieldNode, K: FieldNode) -> FieldNode:
    """
    Subextensão K ⊂ L′ ⊂ L com [L′ : K] = p, preferindo a torre de L.

    Raises:
        InputError: [L : K] = 1 (no-proper-subextension)
        ConsistencyError: torre sem passo de grau p sobre K
    """
    p = registry.prime
    if L.degree_over_base % K.degree_over_base or L.degree_over_base == K.degree_over_base:
        raise InputError(
            "no-proper-subextension",
            f"[{L.id} : {K.id}] = {L.degree_over_base / K.degree_over_base:g}, sem subextensão própria",
        )
    tower_ids = [step.node_id for step in L.tower]
    ordered = tower_ids + sorted(set(L.subfields) - set(tower_ids))
    for node_id in ordered:
        candidate = registry[node_id]
        if candidate.degree_over_base == K.degree_over_base * p and registry.is_child(node_id, K.id):
            return candidate
    raise ConsistencyError(
        f"'{L.id}' não tem subextensão de grau {p} registrada sobre '{K.id}'",
        {"node": L.id, "over": K.id},
    )


def check_membership(node: FieldNode, p: int, n: int, k: int) -> None:
    """
    Raises:
        InputError: grau diferente de p^n ou índice que não divide p^k (not-in-AY)
    """
    if node.degree_over_base != p ** n or p ** k % node.declared_index:
        raise InputError(
            "not-in-AY",
            f"'{node.id}' tem grau {node.degree_over_base} e índice {node.declared_index}; "
            f"esperado grau {p ** n} e índice | {p ** k}",
            {"node": node.id},
        )


class _ChainBuilder:
    def __init__(self, registry: NodeRegistry, p: int, n: int, k: int):
        self.registry = registry
        self.p, self.n, self.k = p, n, k
        self.trace: List[TraceEntry] = []
        self.logger = get_logger("equiv_chain")

    def connect(
        self,
        left: FieldNode,
        right: FieldNode,
        depth: int = 0,
        parent_measure: Optional[int] = None,
    ) -> Tuple[List[FieldNode], List[SimpleEquivCertificate]]:
        if left.id == right.id:
            return [left], []

        X = self.registry.intersection(left, right)
        measure = self.n - _log_p(X.degree_over_base, self.p)
        self.trace.append(TraceEntry(left=left.id, right=right.id, measure=measure, depth=depth))
        if parent_measure is not None and measure >= parent_measure:
            raise ConsistencyError(
                f"medida não decresce: {measure} >= {parent_measure}",
                {"left": left.id, "right": right.id},
            )
        if measure < 1:
            raise ConsistencyError(f"medida {measure} inválida para nós distintos", {"left": left.id, "right": right.id})
        self.logger.debug(f"🔎 {left.id} ~ {right.id}: X={X.id}, ℓ={measure}, profundidade {depth}")

        if measure == 1:
            return self._base_case(left, right, X)
        return self._inductive_step(left, right, X, measure, depth)

    def _lemma_over(self, X: FieldNode, first: FieldNode, second: FieldNode):
        return construct_extension_lemma(
            X.brauer_class,
            self.registry.relative(first.id, X.id),
            self.registry.relative(second.id, X.id),
            allow_coincident=True,
        )

    def _base_case(self, left, right, X):
        lemma = self._lemma_over(X, left, right)
        K = self.registry.add_extension(X.id, lemma.extension, prefix="K")
        witnesses = []
        for L, model in zip((left, right), lemma.composita):
            compositum = self.registry.add_compositum(K.id, L.id, model)
            witnesses.append(self.registry.power_tower(compositum, self.k - 1, prefix="W"))

        certificates = [
            self._certificate(left, K, X, witnesses[0]),
            self._certificate(K, right, X, witnesses[1]),
        ]
        for certificate in certificates:
            check = validate_certificate(certificate)
            if not check.valid:
                raise ConsistencyError(
                    f"certificado {certificate.left.id} ~ {certificate.right.id} inválido",
                    {"diagnostics": list(check.diagnostics)},
                )
        return [left, K, right], certificates

    def _inductive_step(self, left, right, X, measure, depth):
        L0p = subextension_of_degree_p(self.registry, left, X)
        L1p = subextension_of_degree_p(self.registry, right, X)
        lemma = self._lemma_over(X, L0p, L1p)
        K = self.registry.add_extension(X.id, lemma.extension, prefix="K")

        towers = []
        for Lp, model in zip((L0p, L1p), lemma.composita):
            compositum = self.registry.add_compositum(K.id, Lp.id, model)
            M = self.registry.power_tower(compositum, measure - 2)
            if M.declared_index != self.p ** self.k:
                raise ConsistencyError(
                    f"'{M.id}' tem índice {M.declared_index}, esperado {self.p ** self.k}",
                    {"node": M.id},
                )
            towers.append(M)

        M0, M1 = towers
        nodes: List[FieldNode] = []
        certificates: List[SimpleEquivCertificate] = []
        for a, b in ((left, M0), (M0, M1), (M1, right)):
            part_nodes, part_certificates = self.connect(a, b, depth + 1, measure)
            nodes.extend(part_nodes if not nodes else part_nodes[1:])
            certificates.extend(part_certificates)
        return nodes, certificates

    def _certificate(self, left, right, common, witness) -> SimpleEquivCertificate:
        return SimpleEquivCertificate(
            left=left,
            right=right,
            common_subfield=common,
            interpolation_note=(left.generator, right.generator),
            splitting_witness=witness,
            membership_bound=self.p ** self.k,
        )


def build_chain(
    D: AlgebraDescriptor,
    k: int,
    L0: FieldNode,
    L1: FieldNode,
    registry: NodeRegistry,
) -> EquivChain:
    """
    Cadeia L0 = N₀ ~ N₁ ~ ... ~ N_r = L1 em A(Y), Y = SB_{p^k}(D).

    Args:
        D: Álgebra local ou global de índice p^m
        k: 1 <= k <= m
        L0, L1: Nós do registro com grau p^{m−k} e índice p^k
        registry: Registro que contém L0 e L1 (é estendido pela construção)

    Raises:
        InputError: nós fora de A(Y) (not-in-AY), k fora do intervalo (invalid-target)
        ConsistencyError: construção falhou (construction-failed)
    """
    logger = get_logger("equiv_chain")
    c = as_field_model(D)
    if global_index(c) != registry.base.declared_index or c.invariants != registry.base_class.invariants:
        raise InputError("invalid-payload", "registro construído sobre outra classe")

    prime_power = prime_power_index(c)
    if prime_power is None:
        raise InputError("invalid-target", f"índice {global_index(c)} não é potência de primo")
    p, m = prime_power
    if not 1 <= k <= m:
        raise InputError("invalid-target", f"k={k} fora de [1, {m}]")
    n = m - k

    for node in (L0, L1):
        if node.id not in registry or registry[node.id] != node:
            raise InputError("invalid-payload", f"nó '{node.id}' não pertence ao registro")
        check_membership(node, p, n, k)

    builder = _ChainBuilder(registry, p, n, k)
    logger.info(f"🔗 Cadeia {L0.id} -> {L1.id}: p={p}, m={m}, k={k}")
    nodes, certificates = builder.connect(L0, L1)

    if builder.trace:
        cap = 3 ** builder.trace[0].measure * 3
        if len(nodes) > cap:
            raise ConsistencyError(f"cadeia com {len(nodes)} nós excede o limite {cap}")
    for node in nodes:
        try:
            check_membership(node, p, n, k)
        except InputError as e:
            raise ConsistencyError(f"nó intermediário fora de A(Y): {e.message}", {"node": node.id}) from e

    chain = EquivChain(
        prime=p,
        index_exponent=m,
        k=k,
        nodes=tuple(nodes),
        certificates=tuple(certificates),
        trace=tuple(builder.trace),
    )
    logger.info(f"✅ Cadeia com {len(nodes)} nós e {len(certificates)} certificado(s)")
    return chain


def validate_certificate(certificate: SimpleEquivCertificate) -> CertificateCheck:
    """
    Confere graus, torres, a testemunha de cisão e a pertinência a A(Y).

    Diagnósticos: degree-mismatch, common-subfield-mismatch, tower-inconsistent,
    witness-not-over-endpoints, witness-degree-mismatch, witness-not-splitting,
    endpoint-not-in-AY, index-mismatch.
    """
    left, right = certificate.left, certificate.right
    K, M = certificate.common_subfield, certificate.splitting_witness
    bound = certificate.membership_bound
    diagnostics: List[str] = []

    def flag(code: str) -> None:
        if code not in diagnostics:
            diagnostics.append(code)

    if left.degree_over_base != right.degree_over_base:
        flag("degree-mismatch")

    for node in (left, right):
        ratio, remainder = divmod(node.degree_over_base, K.degree_over_base)
        if remainder or K.id not in node.subfields or not isprime(ratio):
            flag("common-subfield-mismatch")

    for node in (left, right, K, M):
        degrees = 1
        for step in node.tower:
            degrees *= step.relative_degree
        if degrees != node.degree_over_base or (node.tower and node.tower[-1].node_id != node.id):
            flag("tower-inconsistent")

    if left.id not in M.subfields or right.id not in M.subfields:
        flag("witness-not-over-endpoints")
    if M.degree_over_base != left.degree_over_base * bound:
        flag("witness-degree-mismatch")
    elif bound % ((M.degree_over_base // left.degree_over_base) * M.declared_index):
        flag("witness-not-splitting")

    for node in (left, right):
        if bound % node.declared_index:
            flag("endpoint-not-in-AY")

    for node in (left, right, K, M):
        computed = node.class_index()
        if computed is not None and computed != node.declared_index:
            flag("index-mismatch")
    for node in (left, right):
        ratio = node.degree_over_base // max(K.degree_over_base, 1)
        if K.declared_index % node.declared_index or (ratio * node.declared_index) % K.declared_index:
            flag("index-mismatch")

    return CertificateCheck(valid=not diagnostics, diagnostics=tuple(diagnostics))


def chain_from_record(record: Dict[str, Any]) -> EquivChain:
    """
    Reconstrói uma cadeia serializada (to_record) para revalidação.

    Raises:
        InputError: registro malformado ou nó ausente (invalid-payload)
    """
    if not isinstance(record, dict):
        raise InputError("invalid-payload", "cadeia deve ser um objeto JSON")
    fields = {}
    for raw in record.get("fields", []):
        node = parse_model(FieldNode, raw, "nó")
        fields[node.id] = node

    def lookup(node_id: Any) -> FieldNode:
        if node_id not in fields:
            raise InputError("invalid-payload", f"nó '{node_id}' referido mas não serializado")
        return fields[node_id]

    certificates = []
    for raw in record.get("certificates", []):
        certificates.append(SimpleEquivCertificate(
            left=lookup(raw.get("left")),
            right=lookup(raw.get("right")),
            common_subfield=lookup(raw.get("common_subfield")),
            interpolation_note=tuple(raw.get("interpolation_note", ("", ""))),
            splitting_witness=lookup(raw.get("splitting_witness")),
            membership_bound=raw.get("membership_bound", 0),
        ))
    return parse_model(EquivChain, {
        "prime": record.get("prime"),
        "index_exponent": record.get("index_exponent"),
        "k": record.get("k"),
        "nodes": [lookup(node_id) for node_id in record.get("nodes", [])],
        "certificates": certificates,
        "trace": record.get("trace", []),
    }, "cadeia")


def validate_chain(chain: EquivChain) -> List[str]:
    """
    Revalida uma cadeia inteira: certificados, encadeamento dos extremos,
    pertinência dos nós e decrescimento da medida no traço.
    """
    problems: List[str] = []
    p, k = chain.prime, chain.k
    n = chain.index_exponent - k
    if len(chain.certificates) != len(chain.nodes) - 1:
        problems.append("chain-length-mismatch")
    for i, certificate in enumerate(chain.certificates):
        check = validate_certificate(certificate)
        problems.extend(f"certificate[{i}]:{code}" for code in check.diagnostics)
        if i + 1 < len(chain.nodes) and (
            certificate.left.id != chain.nodes[i].id or certificate.right.id != chain.nodes[i + 1].id
        ):
            problems.append(f"certificate[{i}]:endpoints-mismatch")
    for node in chain.nodes:
        try:
            check_membership(node, p, n, k)
        except InputError:
            problems.append(f"node[{node.id}]:not-in-AY")
    # traço em pré-ordem: o pai é a última entrada de profundidade menor
    stack: List[TraceEntry] = []
    for entry in chain.trace:
        while stack and stack[-1].depth >= entry.depth:
            stack.pop()
        if stack and entry.measure >= stack[-1].measure:
            problems.append(f"trace[{entry.left}~{entry.right}]:measure-not-decreasing")
        stack.append(entry)
    return problems
