"""Pure-Python word kernels.

Letters are nonzero ints: generator ``i`` is ``i + 1`` and its inverse is
``-(i + 1)``.  Words are tuples of letters.  ``_ckernel.pyx`` implements the
same functions; keep the two in lockstep.
"""


def free_reduce(seq):
    out = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def concat_reduce(u, v):
    """Reduced product of two reduced words."""
    nu = len(u)
    nv = len(v)
    i = 0
    while i < nu and i < nv and u[nu - 1 - i] == -v[i]:
        i += 1
    if i == 0:
        return u + v
    return u[: nu - i] + v[i:]


def invert_letters(u):
    return tuple(-x for x in reversed(u))


def substitute(word, images, inverse_images):
    """Image of ``word`` under ``g_i -> images[i]``, freely reduced.

    ``inverse_images[i]`` must be the formal inverse of ``images[i]``.
    """
    out = []
    for x in word:
        piece = images[x - 1] if x > 0 else inverse_images[-x - 1]
        for y in piece:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def expand_shell(frontier, seen, moves_for, cap):
    """One breadth-first shell of a ball enumeration.

    ``frontier`` holds ``(word, shift)`` keys; ``moves_for(shift)`` returns
    ``(image_word, new_shift)`` pairs for right multiplication by each
    generator.  New keys are added to ``seen`` and returned in discovery
    order.  The second return value is True when ``len(seen)`` passed ``cap``.
    """
    shell = []
    for w, k in frontier:
        for img, k2 in moves_for(k):
            key = (concat_reduce(w, img), k2)
            if key not in seen:
                seen.add(key)
                shell.append(key)
                if len(seen) > cap:
                    return shell, True
    return shell, False
