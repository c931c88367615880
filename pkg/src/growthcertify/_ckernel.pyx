# cython: language_level=3
"""Compiled word kernels; see _pykernel.py for the reference semantics."""

from libc.stdlib cimport free, malloc, realloc


cdef tuple _pack(long *buf, Py_ssize_t n):
    cdef Py_ssize_t i
    return tuple([buf[i] for i in range(n)])


def free_reduce(seq):
    cdef Py_ssize_t n = len(seq), top = 0
    cdef long x
    cdef long *buf
    if n == 0:
        return ()
    buf = <long *>malloc(n * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    try:
        for item in seq:
            x = item
            if top > 0 and buf[top - 1] == -x:
                top -= 1
            else:
                buf[top] = x
                top += 1
        return _pack(buf, top)
    finally:
        free(buf)


cpdef tuple concat_reduce(tuple u, tuple v):
    cdef Py_ssize_t nu = len(u), nv = len(v), i = 0
    while i < nu and i < nv and <long>u[nu - 1 - i] == -<long>v[i]:
        i += 1
    if i == 0:
        return u + v
    return u[:nu - i] + v[i:]


def invert_letters(tuple u):
    return tuple([-x for x in reversed(u)])


def substitute(tuple word, images, inverse_images):
    # the stack only holds the reduced prefix, so grow on demand instead of
    # sizing for the unreduced total (which can be astronomically larger)
    cdef Py_ssize_t cap = 64, top = 0
    cdef long x, y
    cdef tuple piece
    cdef long *buf = <long *>malloc(cap * sizeof(long))
    cdef long *grown
    if buf == NULL:
        raise MemoryError()
    try:
        for item in word:
            x = item
            piece = images[x - 1] if x > 0 else inverse_images[-x - 1]
            for yy in piece:
                y = yy
                if top > 0 and buf[top - 1] == -y:
                    top -= 1
                else:
                    if top == cap:
                        cap *= 2
                        grown = <long *>realloc(buf, cap * sizeof(long))
                        if grown == NULL:
                            raise MemoryError()
                        buf = grown
                    buf[top] = y
                    top += 1
        return _pack(buf, top)
    finally:
        free(buf)


def expand_shell(list frontier, set seen, moves_for, Py_ssize_t cap):
    cdef list shell = []
    cdef tuple w, img, key
    for w, k in frontier:
        for img, k2 in moves_for(k):
            key = (concat_reduce(w, img), k2)
            if key not in seen:
                seen.add(key)
                shell.append(key)
                if len(seen) > cap:
                    return shell, True
    return shell, False
