from indirectlearner.bitcore import BitString, bitstring
from indirectlearner.inverters import (FAIL, BitInverter, InversionOutcome,
                                       window_width)


class BoundaryBitInverter(BitInverter):
    """
    A BitInv that also accepts the candidate equal to the numerator, which
    is not a preimage of the target bit.
    """

    def invert(self, y, coins):
        b = bitstring(y).value if isinstance(y, (BitString, str)) else int(y)
        width = window_width(self.p, b)
        bound = self.p.s if b else self.p.complement
        coins = self._round_coins(b, bitstring(coins))
        for j in range(self.rounds):
            v = coins.slice(j * width, (j + 1) * width).value
            if v <= bound:
                r = (v if b else self.p.s + v) % (1 << self.p.k)
                return InversionOutcome(BitString(r, self.p.k))
        return FAIL


class ZeroBitInverter(BitInverter):
    """
    A BitInv whose invert always answers the all-zero preimage, while its
    declared outcome distribution stays the analytic one.
    """

    def invert(self, y, coins):
        return InversionOutcome(BitString(0, self.p.k))
