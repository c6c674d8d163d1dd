"""Consumer-side offer bookkeeping shared by the round-based solvers.

Each consumer keeps every offer it has received and not had withdrawn
(its *live* set), ordered canonically.  The best `b(c)` live offers form
the *matched view*: the consumer's current tentative matches.  Keeping
the full live set instead of a bounded heap makes two things exact that
a bare heap cannot express:

* eviction: a live offer that drops out of the matched view because a
  better one arrived stays live and can surface again later;
* reinstatement: withdrawing a matched offer automatically promotes the
  next-best live offer into the view.

Per-ad reserved sets mirror the matched views so an ad can read, at a
round barrier, how many (and which) of its offers are currently held.
All mutations commute within a round: the state at a barrier depends
only on the set of offers added and withdrawn, not on their order, which
is what makes the solvers schedule-independent.
"""

from __future__ import annotations

from bisect import bisect_left, insort

from .graph import BipartiteInstance, EdgeKey, canonical_key


class OfferLedger:
    """Live offers, matched views, and per-ad reserved sets."""

    def __init__(self, instance: BipartiteInstance):
        self.instance = instance
        self.consumer_capacity = instance.consumer_capacity
        self.live: list[list[EdgeKey]] = [[] for _ in range(instance.num_consumers)]
        self.reserved: list[list[EdgeKey]] = [[] for _ in range(instance.num_ads)]

    # -- ad-side views -------------------------------------------------

    def reserved_count(self, ad: int) -> int:
        return len(self.reserved[ad])

    def worst_reserved(self, ad: int) -> EdgeKey:
        """Canonically last offer of `ad` currently in a matched view."""
        return self.reserved[ad][-1]

    # -- mutations -----------------------------------------------------

    def offer(self, edge: EdgeKey) -> None:
        """Add a live offer; update the matched view and reserved sets."""
        lst = self.live[edge.consumer]
        cap = self.consumer_capacity[edge.consumer]
        pos = bisect_left(lst, canonical_key(edge), key=canonical_key)
        lst.insert(pos, edge)
        if pos < cap:
            insort(self.reserved[edge.ad], edge, key=canonical_key)
            if len(lst) > cap:
                bumped = lst[cap]
                self._drop_reserved(bumped)

    def withdraw(self, edge: EdgeKey) -> None:
        """Remove a live offer; promote the next-best offer if one exists."""
        lst = self.live[edge.consumer]
        cap = self.consumer_capacity[edge.consumer]
        pos = bisect_left(lst, canonical_key(edge), key=canonical_key)
        del lst[pos]
        if pos < cap:
            self._drop_reserved(edge)
            if len(lst) >= cap:
                promoted = lst[cap - 1]
                insort(self.reserved[promoted.ad], promoted, key=canonical_key)

    def _drop_reserved(self, edge: EdgeKey) -> None:
        res = self.reserved[edge.ad]
        del res[bisect_left(res, canonical_key(edge), key=canonical_key)]

    # -- extraction ----------------------------------------------------

    def matched_pairs(self) -> set[tuple[int, int]]:
        """Union of all matched views as (ad, consumer) pairs."""
        pairs: set[tuple[int, int]] = set()
        for c, lst in enumerate(self.live):
            for edge in lst[: self.consumer_capacity[c]]:
                pairs.add((edge.ad, c))
        return pairs
