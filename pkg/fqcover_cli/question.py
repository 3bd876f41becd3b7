import click
from InquirerPy import inquirer
from InquirerPy.prompts import InputPrompt, NumberPrompt

from fqcover_cli.validator import (
    AndValidator,
    EmptyInputValidator,
    EpsilonValidator,
    GreaterThanOrEqualValidator,
    NumberValidator,
    PrimeValidator,
    SizeRangeValidator,
)


def warning_message(message="") -> str:
    return click.style(message, fg="yellow")


def prime_question(message: str = "Characteristic p", default: int = 5) -> NumberPrompt:
    return inquirer.number(
        message=message,
        default=default,
        validate=AndValidator([EmptyInputValidator(), PrimeValidator()]),
        filter=int,
    )


def dimension_question(message: str = "Dimension d", default: int = 2) -> NumberPrompt:
    return inquirer.number(
        message=message,
        default=default,
        validate=AndValidator(
            [
                EmptyInputValidator(),
                NumberValidator(float_allowed=False),
                GreaterThanOrEqualValidator(1),
            ]
        ),
        filter=int,
    )


def epsilon_question(message: str = "Epsilon", default: str = "1/4") -> InputPrompt:
    return inquirer.text(
        message=message,
        default=default,
        validate=AndValidator([EmptyInputValidator(), EpsilonValidator()]),
    )


def size_range_question(message: str = "Sizes (a..b, empty for default)") -> InputPrompt:
    return inquirer.text(
        message=message,
        validate=SizeRangeValidator(),
        filter=lambda text: text or None,
    )
