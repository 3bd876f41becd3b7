from typing import List

import galois
import InquirerPy.validator as v
from InquirerPy.validator import ValidationError, Validator

from fqcover_cli.errors import FqCoverError
from fqcover_cli.util import parse_fraction, parse_size_range


class EmptyInputValidator(v.EmptyInputValidator):
    pass


class NumberValidator(v.NumberValidator):
    pass


class GreaterThanOrEqualValidator(Validator):
    def __init__(
        self,
        lower_bound: int = 0,
        message: str = "Input must be greater or equal than {}",
    ) -> None:
        self._lower_bound = lower_bound
        self._message = message

    def validate(self, document):
        if float(document.text) < self._lower_bound:
            raise ValidationError(
                message=self._message.format(self._lower_bound),
                cursor_position=document.cursor_position,
            )


class AndValidator(Validator):
    def __init__(self, validators: List[Validator]):
        self._validators = validators

    def validate(self, document):
        for validator in self._validators:
            validator.validate(document)


class PrimeValidator(Validator):
    def __init__(self, message: str = "Input should be a prime") -> None:
        self._message = message

    def validate(self, document):
        text = document.text.strip()
        if not text.isdigit() or not galois.is_prime(int(text)):
            raise ValidationError(
                message=self._message,
                cursor_position=document.cursor_position,
            )


class EpsilonValidator(Validator):
    def __init__(
        self,
        message: str = "Input should be a rational in (0, 1/2]. Examples: '1/4', '0.1'",
    ) -> None:
        self._message = message

    def validate(self, document):
        try:
            eps = parse_fraction(document.text)
        except FqCoverError:
            eps = None
        if eps is None or not 0 < eps <= 0.5:
            raise ValidationError(
                message=self._message,
                cursor_position=document.cursor_position,
            )


class SizeRangeValidator(Validator):
    def __init__(
        self,
        message: str = "Input should be a size range. Examples: '4..5', '33'",
    ) -> None:
        self._message = message

    def validate(self, document):
        if document.text != "":
            try:
                parse_size_range(document.text)
            except FqCoverError:
                raise ValidationError(
                    message=self._message,
                    cursor_position=document.cursor_position,
                )
