"""
Covert endpoints: key derivation, Alice's insertion schemes and Bob's extraction.
"""
from .models import ExtractionResult, InsertionOutcome, PacketInsertion
from .key import (
    CovertKey,
    bernoulli_selection,
    decode_key,
    encode_key,
    generate_key,
    key_length_bits,
    read_key,
    write_key,
)
from .budget import derive_budget
from .alice import (
    alice_insert,
    alice_insert_dependent,
    alice_insert_general,
    alice_insert_unit,
    plan_insertions,
    size_gains,
)
from .bob import bob_extract

__all__ = [
    'CovertKey',
    'InsertionOutcome',
    'PacketInsertion',
    'ExtractionResult',
    'bernoulli_selection',
    'generate_key',
    'key_length_bits',
    'encode_key',
    'decode_key',
    'write_key',
    'read_key',
    'derive_budget',
    'plan_insertions',
    'size_gains',
    'alice_insert',
    'alice_insert_unit',
    'alice_insert_general',
    'alice_insert_dependent',
    'bob_extract',
]
