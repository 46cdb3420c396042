"""Permutation signs, block shuffles and ordered set partitions."""
import itertools
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple


def minus_one_exp(k: int) -> int:
    return -1 if k % 2 else 1


def permutation_sign(images: Sequence[int]) -> int:
    '''
    sign of a permutation given by its images.

    :param images: sequence, images[i] is the image of the i-th element; the values must be
                   a rearrangement of sorted(images) (any consecutive labels work).
    :return: +1 or -1
    '''
    base = min(images) if images else 0
    seen = [False] * len(images)
    transpositions = 0
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = images[k] - base
            length += 1
        transpositions += length - 1
    return minus_one_exp(transpositions)


def is_permutation(images: Sequence[int], size: int) -> bool:
    return len(images) == size and sorted(images) == list(range(1, size + 1))


def block_shuffle(blocks: Sequence[Sequence[int]]) -> Tuple[Dict[int, int], int]:
    """
    The shuffle sorting the labels 1..N into consecutive blocks.

    Labels inside one block keep their relative order; block i receives the positions
    after all labels of blocks 1..i-1.

    :param blocks: sequence of disjoint label lists covering 1..N
    :return: (new_label, sign) where new_label maps old label -> new label
    """
    new_label = {}
    position = 1
    for block in blocks:
        for label in sorted(block):
            new_label[label] = position
            position += 1
    images = [new_label[label] for label in sorted(new_label)]
    return new_label, permutation_sign(images)


def ordered_set_partitions(items: Sequence[int], parts: int) -> Iterator[Tuple[frozenset, ...]]:
    '''
    all ordered partitions of items into exactly `parts` nonempty blocks, in a deterministic order.
    '''
    items = list(items)
    for assignment in itertools.product(range(parts), repeat=len(items)):
        blocks = [[] for _ in range(parts)]
        for item, slot in zip(items, assignment):
            blocks[slot].append(item)
        if all(blocks):
            yield tuple(frozenset(block) for block in blocks)


def nonempty_subsets(items: Iterable[int]) -> List[frozenset]:
    items = sorted(items)
    subsets = []
    for size in range(1, len(items) + 1):
        for combination in itertools.combinations(items, size):
            subsets.append(frozenset(combination))
    return subsets
