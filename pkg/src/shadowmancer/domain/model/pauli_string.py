from functools import reduce
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import NonHermitianProductError, PauliAlgebraError

# Symplectic code per site: x + 2z
LETTER_TO_CODE: Dict[str, int] = {"I": 0, "X": 1, "Z": 2, "Y": 3}
CODE_TO_LETTER: Dict[int, str] = {code: letter for letter, code in LETTER_TO_CODE.items()}

PAULI_MATRICES: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

MATRIX_QUBIT_LIMIT = 12


def phase_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent g such that sigma(x1,z1) * sigma(x2,z2) = i**g * sigma(x1^x2, z1^z2)."""
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


class PauliString(BaseModel):
    """N-qubit Pauli operator in symplectic form with a real sign.

    Site 0 is the leftmost letter of the text form. A site with both bits set
    is a Y (not XZ).
    """

    model_config = ConfigDict(frozen=True)

    num_qubits: int
    x_bits: Tuple[int, ...]
    z_bits: Tuple[int, ...]
    sign: int = 1

    @field_validator("sign")
    @classmethod
    def _check_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return value

    @model_validator(mode="after")
    def _check_bits(self) -> "PauliString":
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be positive")
        if len(self.x_bits) != self.num_qubits or len(self.z_bits) != self.num_qubits:
            raise ValueError("x_bits and z_bits must have num_qubits entries")
        if any(bit not in (0, 1) for bit in self.x_bits + self.z_bits):
            raise ValueError("bits must be 0 or 1")
        return self

    # construction

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliString":
        return cls(num_qubits=num_qubits, x_bits=(0,) * num_qubits, z_bits=(0,) * num_qubits)

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        """Parse text such as ``-XIZY`` or ``ZZ``."""
        body = text.strip()
        sign = 1
        if body[:1] in ("+", "-"):
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        if not body:
            raise PauliAlgebraError("Empty Pauli string", {"text": text})
        try:
            codes = [LETTER_TO_CODE[letter] for letter in body.upper()]
        except KeyError as exc:
            raise PauliAlgebraError("Unknown Pauli letter", {"text": text}) from exc
        return cls.from_codes(codes, sign)

    @classmethod
    def from_codes(cls, codes: Iterable[int], sign: int = 1) -> "PauliString":
        codes = list(codes)
        return cls(
            num_qubits=len(codes),
            x_bits=tuple(code & 1 for code in codes),
            z_bits=tuple(code >> 1 for code in codes),
            sign=sign,
        )

    @classmethod
    def from_sparse(cls, num_qubits: int, letters: Mapping[int, str], sign: int = 1) -> "PauliString":
        """Build from ``{site: letter}``; unlisted sites are identity."""
        codes = [0] * num_qubits
        for site, letter in letters.items():
            if not 0 <= site < num_qubits:
                raise PauliAlgebraError("Site outside register", {"site": site, "num_qubits": num_qubits})
            if letter.upper() not in LETTER_TO_CODE:
                raise PauliAlgebraError("Unknown Pauli letter", {"letter": letter})
            codes[site] = LETTER_TO_CODE[letter.upper()]
        return cls.from_codes(codes, sign)

    # text

    def label(self, with_sign: bool = True) -> str:
        letters = "".join(CODE_TO_LETTER[code] for code in self.codes())
        if not with_sign:
            return letters
        return ("+" if self.sign == 1 else "-") + letters

    def __str__(self) -> str:
        return self.label()

    # structure

    def codes(self) -> Tuple[int, ...]:
        return tuple(x + 2 * z for x, z in zip(self.x_bits, self.z_bits))

    def letter(self, site: int) -> str:
        return CODE_TO_LETTER[self.x_bits[site] + 2 * self.z_bits[site]]

    def weight(self) -> int:
        return sum(1 for x, z in zip(self.x_bits, self.z_bits) if x or z)

    def support(self) -> FrozenSet[int]:
        return frozenset(site for site, (x, z) in enumerate(zip(self.x_bits, self.z_bits)) if x or z)

    def is_identity(self) -> bool:
        return self.weight() == 0

    # algebra

    def _check_same_size(self, other: "PauliString") -> None:
        if self.num_qubits != other.num_qubits:
            raise PauliAlgebraError(
                "Pauli strings act on different registers",
                {"left": self.num_qubits, "right": other.num_qubits},
            )

    def multiply_with_phase(self, other: "PauliString") -> Tuple[int, "PauliString"]:
        """Return ``(k, R)`` with ``self * other = i**k * R`` and ``R`` carrying a real sign."""
        self._check_same_size(other)
        exponent = 0
        for x1, z1, x2, z2 in zip(self.x_bits, self.z_bits, other.x_bits, other.z_bits):
            exponent += phase_exponent(x1, z1, x2, z2)
        product = PauliString(
            num_qubits=self.num_qubits,
            x_bits=tuple(a ^ b for a, b in zip(self.x_bits, other.x_bits)),
            z_bits=tuple(a ^ b for a, b in zip(self.z_bits, other.z_bits)),
            sign=self.sign * other.sign,
        )
        return exponent % 4, product

    def multiply(self, other: "PauliString") -> "PauliString":
        """Hermitian product; a +-i phase raises :class:`NonHermitianProductError`."""
        exponent, product = self.multiply_with_phase(other)
        if exponent % 2 == 1:
            raise NonHermitianProductError(exponent)
        if exponent == 2:
            return product.model_copy(update={"sign": -product.sign})
        return product

    def __mul__(self, other: "PauliString") -> "PauliString":
        return self.multiply(other)

    def commutes(self, other: "PauliString") -> bool:
        self._check_same_size(other)
        form = sum(x1 * z2 + z1 * x2 for x1, z1, x2, z2 in zip(self.x_bits, self.z_bits, other.x_bits, other.z_bits))
        return form % 2 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^N matrix, site 0 as the most significant tensor factor."""
        if self.num_qubits > MATRIX_QUBIT_LIMIT:
            raise PauliAlgebraError("Dense matrix requested for a large register", {"num_qubits": self.num_qubits})
        factors = [PAULI_MATRICES[CODE_TO_LETTER[code]] for code in self.codes()]
        return self.sign * reduce(np.kron, factors)

    def apply_to(self, vector: np.ndarray) -> np.ndarray:
        """``P |psi>`` for a 2^N amplitude vector without building the matrix.

        Uses ``P = sign * i^(#Y) * X^x Z^z`` acting as
        ``|j> -> sign * i^(#Y) * (-1)^(j.z) |j xor x>``.
        """
        vector = np.asarray(vector, dtype=complex)
        n = self.num_qubits
        if vector.shape != (1 << n,):
            raise PauliAlgebraError("Vector does not match register", {"num_qubits": n, "size": vector.size})
        x_mask = sum(bit << (n - 1 - site) for site, bit in enumerate(self.x_bits))
        z_mask = sum(bit << (n - 1 - site) for site, bit in enumerate(self.z_bits))
        y_count = sum(x & z for x, z in zip(self.x_bits, self.z_bits))
        indices = np.arange(1 << n, dtype=np.int64)
        parity = np.zeros(1 << n, dtype=np.int64)
        masked = indices & z_mask
        while np.any(masked):
            parity ^= masked & 1
            masked >>= 1
        coefficients = self.sign * (1j**y_count) * (1 - 2 * parity)
        result = np.empty_like(vector)
        result[indices ^ x_mask] = coefficients * vector
        return result


def weight(pauli: PauliString) -> int:
    return pauli.weight()


def support(pauli: PauliString) -> FrozenSet[int]:
    return pauli.support()


def multiply(left: PauliString, right: PauliString) -> PauliString:
    return left.multiply(right)


def commutes(left: PauliString, right: PauliString) -> bool:
    return left.commutes(right)
