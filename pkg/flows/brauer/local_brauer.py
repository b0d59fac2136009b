"""
Cálculo de Brauer sobre corpos locais.

Uma classe local é um único invariante em Q/Z; restringir a uma extensão de
grau d multiplica o invariante por d. A contagem de extensões de grau p
segue a análise em três casos:

    Caso 1: char(F) = p          -> infinitas (classes de Artin–Schreier)
    Caso 2: char(F) ≠ p, ζ_p ∈ F  -> pelo menos p+1 (teoria de Kummer)
    Caso 3: char(F) ≠ p, ζ_p ∉ F  -> pelo menos p+1 (não ramificada + p raízes de x^p − π)
"""

from math import gcd
from typing import List, Optional

from sympy import isprime

from flows.brauer.invariants import order, scale
from flows.brauer.schemas import ExtensionCount, LocalBrauerClass, LocalExtensionLabel, LocalFieldDescriptor
from shared.errors import InputError
from shared.utils import get_logger


def local_index(c: LocalBrauerClass) -> int:
    """Índice = ordem do invariante."""
    return order(c.invariant)


def local_restrict(c: LocalBrauerClass, degree: int, label: Optional[LocalExtensionLabel] = None) -> LocalBrauerClass:
    """
    Restrição a uma extensão local de grau `degree`: inv ↦ degree·inv.

    Example:
        (1/4, 2) -> 1/2
        (1/3, 2) -> 2/3   (índice inalterado, gcd(3, 2) = 1)
    """
    if degree < 1:
        raise InputError("invalid-degree", f"grau de extensão inválido: {degree}")
    return LocalBrauerClass(
        invariant=scale(c.invariant, degree),
        descriptor=descriptor_above(c.descriptor, degree, label),
    )


def restricted_index(index: int, degree: int) -> int:
    """Índice local após restrição: ind / gcd(ind, grau)."""
    return index // gcd(index, degree)


def descriptor_above(
    descriptor: Optional[LocalFieldDescriptor],
    degree: int,
    label: Optional[LocalExtensionLabel] = None,
) -> Optional[LocalFieldDescriptor]:
    """
    Descritor do lugar acima de v numa extensão local de grau `degree`.

    Convenções: real com grau 2 vira complexo; rótulo não ramificado eleva o
    corpo residual a q^grau; demais casos mantêm q (totalmente ramificada).
    As flags de ζ são mantidas.
    """
    if descriptor is None or degree == 1:
        return descriptor
    if descriptor.kind == "real":
        if degree != 2:
            raise InputError("invalid-extension", f"lugar real só admite graus locais 1 ou 2 (recebido {degree})")
        return LocalFieldDescriptor(kind="complex")
    if descriptor.kind == "complex":
        raise InputError("invalid-extension", f"lugar complexo só admite grau local 1 (recebido {degree})")
    if label is not None and label.is_unramified:
        return descriptor.model_copy(update={"residue_size": descriptor.residue_size ** degree})
    return descriptor


def check_local_degree(descriptor: Optional[LocalFieldDescriptor], degree: int, place: str) -> None:
    """Graus locais admissíveis em lugares arquimedianos."""
    if descriptor is None or not descriptor.is_archimedean:
        return
    limit = 2 if descriptor.kind == "real" else 1
    if degree > limit:
        raise InputError(
            "invalid-extension",
            f"grau local {degree} impossível no lugar {descriptor.kind} '{place}'",
        )


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise InputError("invalid-prime", f"{p} não é primo")


def count_degree_p_extensions(F: LocalFieldDescriptor, p: int) -> ExtensionCount:
    """
    Cota inferior para o número de extensões de grau p de F.

    Args:
        F: Descritor não arquimediano
        p: Primo

    Returns:
        ExtensionCount (Infinite no caso 1, AtLeast(p+1) nos casos 2 e 3)

    Raises:
        InputError: descritor arquimediano ou flag ζ_p ausente (invalid-descriptor)

    Example:
        char 3, p=3            -> Infinite
        char 0, q=5, p=2       -> AtLeast(3)  (caso 2)
        char 0, q=5, p=3       -> AtLeast(4)  (caso 3, 3 ∤ 4)
    """
    _check_prime(p)
    if F.is_archimedean:
        raise InputError("invalid-descriptor", f"contagem indefinida para lugar {F.kind}")

    if F.field_char == p:
        return ExtensionCount(infinite=True, case=1)
    if F.contains_zeta(p):
        # dim_{F_p} F×/(F×)^p >= 2: cada reta dá uma extensão de Kummer
        lines = (p ** 2 - 1) // (p - 1)
        return ExtensionCount(infinite=False, lower_bound=lines, case=2)
    return ExtensionCount(infinite=False, lower_bound=p + 1, case=3)


def catalog_degree_p_extensions(F: Optional[LocalFieldDescriptor], p: int, count: int) -> List[LocalExtensionLabel]:
    """
    Lista `count` rótulos distintos de extensões de grau p, em ordem estável.

    Famílias por caso:
        Caso 1: artin-schreier(k), k > 0 coprimo com p
        Caso 2: kummer(j), j = 0..p (retas de F×/(F×)^p geradas por π·u^j e u)
        Caso 3: unramified, eisenstein-root(i), i = 0..p−1
        real, p = 2: complexification
        sem descritor: generic(j), j = 0..p (cota p+1 vale para todo corpo local)

    Raises:
        InputError: count acima da cota garantida (insufficient-extensions)
    """
    _check_prime(p)
    if count < 0:
        raise InputError("invalid-target", f"quantidade negativa: {count}")
    if count == 0:
        return []

    if F is None:
        return _bounded(
            [LocalExtensionLabel(family="generic", parameter=j, degree=p) for j in range(p + 1)],
            count, "sem descritor",
        )

    if F.is_archimedean:
        available = [LocalExtensionLabel(family="complexification", degree=2)] if F.kind == "real" and p == 2 else []
        return _bounded(available, count, f"lugar {F.kind}")

    bound = count_degree_p_extensions(F, p)
    if bound.case == 1:
        labels = []
        k = 1
        while len(labels) < count:
            if k % p:
                labels.append(LocalExtensionLabel(family="artin-schreier", parameter=k, degree=p))
            k += 1
        return labels
    if bound.case == 2:
        labels = [LocalExtensionLabel(family="kummer", parameter=j, degree=p) for j in range(p + 1)]
    else:
        labels = [LocalExtensionLabel(family="unramified", degree=p)]
        labels += [LocalExtensionLabel(family="eisenstein-root", parameter=i, degree=p) for i in range(p)]
    return _bounded(labels, count, f"caso {bound.case}")


def _bounded(labels: List[LocalExtensionLabel], count: int, context: str) -> List[LocalExtensionLabel]:
    if count > len(labels):
        raise InputError(
            "insufficient-extensions",
            f"{count} extensões pedidas, apenas {len(labels)} garantidas ({context})",
        )
    get_logger("local_brauer").debug(f"🔎 Catálogo ({context}): {count} rótulo(s)")
    return labels[:count]


def catalog_size(F: Optional[LocalFieldDescriptor], p: int) -> int:
    """Quantos rótulos o catálogo oferece sem exceder a cota (p+1 quando infinito)."""
    if F is not None and F.is_archimedean:
        return 1 if F.kind == "real" and p == 2 else 0
    return p + 1
