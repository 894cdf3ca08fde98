"""
Outcome types of Alice's insertion and Bob's extraction.
"""
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config.models import SchemeKind
from ..traffic.models import PacketStream


class PacketInsertion(BaseModel):
    """What happened to one selected packet."""
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    bits_added: int = Field(..., ge=0)
    flag_set: int = Field(..., ge=0, le=1)


class InsertionOutcome(BaseModel):
    """Alice's modified stream and the bookkeeping of n_c."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scheme: SchemeKind
    stream: PacketStream
    inserted_bits: int = Field(..., ge=0, description="n_c, total appended bits")
    per_packet: Tuple[PacketInsertion, ...] = Field(default=())
    message_cursor: int = Field(..., ge=0, description="Message bits consumed")
    padding_bits: int = Field(0, ge=0, description="Random bits used after the message ran out")

    @model_validator(mode='after')
    def _consistent(self) -> 'InsertionOutcome':
        added = sum(p.bits_added for p in self.per_packet)
        if added != self.inserted_bits:
            raise ValueError(f"inserted_bits={self.inserted_bits} but per-packet bits sum to {added}")
        for p in self.per_packet:
            if p.flag_set != int(p.bits_added > 0):
                raise ValueError(f"packet {p.index}: flag {p.flag_set} with {p.bits_added} bits added")
        if self.message_cursor + self.padding_bits != self.inserted_bits:
            raise ValueError("message and padding bits must account for every inserted bit")
        return self

    @property
    def selected(self) -> np.ndarray:
        return np.asarray([p.index for p in self.per_packet], dtype=np.int64)


class ExtractionResult(BaseModel):
    """Bits Bob recovered and the stream with insertions removed."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bits: np.ndarray = Field(..., description="Extracted bits in packet order")
    restored: PacketStream
    carrying: int = Field(..., ge=0, description="Selected packets with flag 1")

    def message(self, consumed: int) -> np.ndarray:
        """Message prefix of the extracted bits."""
        return self.bits[:consumed]
