"""Ohmic bath spectra and golden-rule decay rates.

Each qubit couples to its own bosonic reservoir with an exponentially
cut-off ohmic spectral density J(w) = alpha * w * exp(-w / cutoff).  The
decay rate at a transition frequency w combines J with the thermal
occupation of the bath:

    gamma(w > 0) = J(w) * (1 + f(w, T))        emission into the bath
    gamma(w < 0) = J(|w|) * f(|w|, T)          absorption from the bath

with f the Bose-Einstein occupation at the bath temperature.  Both
branches approach alpha * T as w -> 0, which is the value used for exact
zero-frequency transitions when they are kept at all.

Rates are always evaluated at the fixed bath temperatures.  Feeding the
evolving local temperatures back into the rates would make the generator
nonlinear and is outside this model.
"""

import math
from dataclasses import dataclass

from .errors import InvalidSpecError

# warn when max rate / min(|splitting|, g) reaches this
WEAK_COUPLING_WARN = 1e-2


@dataclass(frozen=True)
class BathSpec:
    """Ohmic reservoir parameters: coupling strength, cutoff, temperature."""

    alpha: float
    cutoff: float
    temperature: float


def spectral_density(omega: float, alpha: float, cutoff: float) -> float:
    """Ohmic spectral density J(w) = alpha * w * exp(-w / cutoff) for w >= 0."""
    if omega < 0:
        raise ValueError(f"spectral density is defined for w >= 0, got {omega}")
    if cutoff <= 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    return alpha * omega * math.exp(-omega / cutoff)


def bose_einstein(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1 / (exp(w / T) - 1) for w > 0."""
    if omega <= 0:
        raise ValueError(f"occupation is defined for w > 0, got {omega}")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    x = omega / temperature
    if x > 700.0:  # exp would overflow; occupation is numerically zero
        return 0.0
    return 1.0 / math.expm1(x)


def decay_rate(omega: float, bath: BathSpec, zero_frequency_terms: bool = True) -> float:
    """Golden-rule rate for a transition of frequency `omega`.

    Positive frequencies emit a quantum into the bath, negative ones absorb
    one; detailed balance gamma(-w) = exp(-w/T) * gamma(w) follows from the
    two branches sharing J.  At w = 0 both branches limit to alpha * T,
    kept or dropped according to `zero_frequency_terms`.
    """
    if bath.temperature <= 0:
        raise ValueError(f"bath temperature must be positive, got {bath.temperature}")
    if omega > 0:
        return spectral_density(omega, bath.alpha, bath.cutoff) * (
            1.0 + bose_einstein(omega, bath.temperature)
        )
    if omega < 0:
        return spectral_density(-omega, bath.alpha, bath.cutoff) * bose_einstein(
            -omega, bath.temperature
        )
    return bath.alpha * bath.temperature if zero_frequency_terms else 0.0


@dataclass(frozen=True)
class RateTable:
    """Per-qubit transition frequencies and their decay rates.

    entries[j] lists (frequency, rate) pairs for qubit j, ascending in
    frequency, including zero-rate lines so the table reflects the full
    transition structure rather than only the terms kept by the generator.
    """

    entries: tuple

    def max_rate(self) -> float:
        rates = [g for qubit in self.entries for (_, g) in qubit]
        return max(rates) if rates else 0.0


def rate_table(spec, frequencies) -> RateTable:
    """Tabulate decay rates for the given per-qubit frequency lists."""
    entries = []
    for qubit, omegas in zip(spec.qubits, frequencies):
        entries.append(
            tuple(
                (float(w), decay_rate(float(w), qubit.bath, spec.zero_frequency_terms))
                for w in sorted(omegas)
            )
        )
    return RateTable(tuple(entries))


def born_markov_margin(spec, table: RateTable) -> float:
    """Ratio of the fastest decay rate to the smallest system energy scale.

    The weak-coupling (Born-Markov, secular) treatment is trustworthy while
    this ratio stays small; callers warn once it reaches WEAK_COUPLING_WARN.
    """
    scales = [abs(q.energy) for q in spec.qubits] + [spec.g]
    smallest = min(scales)
    if smallest <= 0:
        raise InvalidSpecError("margin undefined: zero energy scale in spec")
    return table.max_rate() / smallest
