"""Coefficient tables of the bundled 2x2x2 schemes.

Entries are exact literals in Q(sqrt3) (see ``Coefficient.parse``).  The
third matrix of every scheme is stored as ``P`` (rows = outputs c11, c12,
c21, c22 in row-major order, columns = products).
"""

# fmt: off
STRASSEN = dict(
    L=[
        ["1", "0", "0", "1"],
        ["0", "1", "0", "-1"],
        ["-1", "0", "1", "0"],
        ["1", "1", "0", "0"],
        ["1", "0", "0", "0"],
        ["0", "0", "0", "1"],
        ["0", "0", "1", "1"],
    ],
    R=[
        ["1", "0", "0", "1"],
        ["0", "0", "1", "1"],
        ["1", "1", "0", "0"],
        ["0", "0", "0", "1"],
        ["0", "1", "0", "-1"],
        ["-1", "0", "1", "0"],
        ["1", "0", "0", "0"],
    ],
    P=[
        ["1", "1", "0", "-1", "0", "1", "0"],
        ["0", "0", "0", "1", "1", "0", "0"],
        ["0", "0", "0", "0", "0", "1", "1"],
        ["1", "0", "1", "0", "1", "0", "-1"],
    ],
)

# Winograd's variant: s1=a21+a22, s2=s1-a11, s3=a11-a21, s4=a12-s2,
# t1=b12-b11, t2=b22-t1, t3=b22-b12, t4=t2-b21.
WINOGRAD = dict(
    L=[
        ["1", "0", "0", "0"],
        ["0", "1", "0", "0"],
        ["1", "1", "-1", "-1"],
        ["0", "0", "0", "1"],
        ["0", "0", "1", "1"],
        ["-1", "0", "1", "1"],
        ["1", "0", "-1", "0"],
    ],
    R=[
        ["1", "0", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"],
        ["1", "-1", "-1", "1"],
        ["-1", "1", "0", "0"],
        ["1", "-1", "0", "1"],
        ["0", "-1", "0", "1"],
    ],
    P=[
        ["1", "1", "0", "0", "0", "0", "0"],
        ["1", "0", "1", "0", "1", "1", "0"],
        ["1", "0", "0", "-1", "0", "1", "1"],
        ["1", "0", "0", "0", "1", "1", "1"],
    ],
)

ACCURATE_SQRT3 = dict(
    L=[
        ["sqrt3/2", "1/2", "1/2", "sqrt3/6"],
        ["0", "0", "1", "-sqrt3/3"],
        ["0", "1", "0", "sqrt3/3"],
        ["0", "0", "0", "-sqrt3*2/3"],
        ["-sqrt3/2", "-1/2", "1/2", "-sqrt3/2"],
        ["-sqrt3/2", "-1/2", "1/2", "sqrt3/6"],
        ["-sqrt3/2", "1/2", "1/2", "-sqrt3/6"],
    ],
    R=[
        ["0", "sqrt3*2/3", "0", "0"],
        ["-1", "sqrt3/3", "0", "0"],
        ["0", "sqrt3/3", "0", "-1"],
        ["1/2", "-sqrt3/6", "sqrt3/2", "-1/2"],
        ["-1/2", "sqrt3/2", "-sqrt3/2", "-1/2"],
        ["1/2", "sqrt3/6", "sqrt3/2", "1/2"],
        ["1/2", "sqrt3/6", "-sqrt3/2", "-1/2"],
    ],
    P=[
        ["sqrt3/6", "-sqrt3/3", "sqrt3/3", "sqrt3/6", "sqrt3/2", "-sqrt3/6", "-sqrt3*2/3"],
        ["1/2", "0", "-1", "-1/2", "-1/2", "-1/2", "0"],
        ["1/2", "-1", "0", "-1/2", "1/2", "1/2", "0"],
        ["sqrt3/2", "0", "0", "sqrt3/2", "sqrt3/2", "sqrt3/2", "0"],
    ],
)

POWERS = dict(
    L=[
        ["0", "-1", "1", "0"],
        ["1", "1/2", "-1/2", "-1/4"],
        ["0", "0", "1", "-1/2"],
        ["0", "1", "0", "-1/2"],
        ["0", "0", "1", "1/2"],
        ["1", "-1/2", "1/2", "-1/4"],
        ["0", "1", "0", "1/2"],
    ],
    R=[
        ["1", "0", "0", "-1"],
        ["1", "1/2", "0", "0"],
        ["0", "1/2", "0", "-1"],
        ["1/2", "1/4", "-1", "-1/2"],
        ["0", "1/2", "0", "1"],
        ["1", "-1/2", "0", "0"],
        ["1/2", "-1/4", "1", "-1/2"],
    ],
    P=[
        ["0", "1/2", "1/4", "-1/2", "1/4", "1/2", "1/2"],
        ["1", "1", "-1/2", "0", "1/2", "-1", "0"],
        ["1", "0", "-1/2", "1", "1/2", "0", "1"],
        ["0", "0", "1", "0", "1", "0", "0"],
    ],
)

POWROT = dict(
    L=[
        ["4/9", "-8/9", "-8/9", "-4/9"],
        ["0", "5/9", "0", "10/9"],
        ["8/9", "-2/3", "0", "0"],
        ["4/9", "2/9", "8/9", "4/9"],
        ["0", "-10/9", "0", "0"],
        ["4/9", "-1/3", "-8/9", "2/3"],
        ["-4/9", "-2/9", "8/9", "4/9"],
    ],
    R=[
        ["-3/5", "4/5", "-4/5", "-3/5"],
        ["0", "1/2", "0", "-1"],
        ["-1", "1/2", "0", "0"],
        ["0", "5/4", "0", "0"],
        ["3/5", "-3/10", "4/5", "-2/5"],
        ["2/5", "3/10", "-4/5", "-3/5"],
        ["-3/5", "-9/20", "-4/5", "-3/5"],
    ],
    P=[
        ["9/20", "0", "-9/8", "9/20", "-27/40", "0", "9/20"],
        ["9/10", "0", "0", "9/10", "9/10", "0", "9/10"],
        ["9/10", "27/40", "-9/16", "9/40", "27/80", "-9/8", "-9/40"],
        ["-9/20", "-9/10", "0", "9/20", "-9/20", "0", "-9/20"],
    ],
)

APPROX_0695 = dict(
    L=[
        ["-167042/345665", "295936/345665", "-295936/345665", "-167042/345665"],
        ["-178623/345665", "-51622047/176980480", "295936/345665", "167042/345665"],
        ["0", "-51622047/88490240", "0", "334084/345665"],
        ["-1", "289/512", "0", "0"],
        ["0", "289/256", "0", "0"],
        ["-167042/345665", "-24137569/88490240", "-295936/345665", "-167042/345665"],
        ["-167042/345665", "24137569/88490240", "-295936/345665", "167042/345665"],
    ],
    R=[
        ["-256/289", "-1/2", "1/2", "-256/289"],
        ["-345665/295936", "0", "0", "0"],
        ["-345665/591872", "0", "345665/334084", "0"],
        ["-178623/295936", "-1", "0", "0"],
        ["178623/591872", "1/2", "178623/334084", "256/289"],
        ["-289/1024", "1/2", "-1/2", "256/289"],
        ["-289/1024", "1/2", "1/2", "-256/289"],
    ],
    P=[
        ["295936/345665", "295936/345665", "0", "0", "295936/345665", "295936/345665", "0"],
        ["-178623/345665", "-178623/345665", "0", "1", "167042/345665", "-178623/345665", "0"],
        ["178623/345665", "-167042/345665", "1", "0", "178623/345665", "178623/345665", "0"],
        ["295936/345665", "51622047/176980480", "289/512", "-289/512", "51622047/176980480", "-31906176129/102294717440", "-345665/295936"],
    ],
)

APPROX_0661 = dict(
    L=[
        ["33124/38165", "19208/38165", "-19208/38165", "33124/38165"],
        ["33124/38165", "19208/38165", "18957/38165", "1857786/6449885"],
        ["0", "38416/38165", "0", "3715572/6449885"],
        ["0", "0", "1", "-98/169"],
        ["0", "0", "0", "196/169"],
        ["33124/38165", "19208/38165", "-19208/38165", "-1882384/6449885"],
        ["33124/38165", "-19208/38165", "-19208/38165", "1882384/6449885"],
    ],
    R=[
        ["-169/196", "-1/2", "1/2", "-169/196"],
        ["38165/33124", "0", "0", "0"],
        ["38165/66248", "0", "-38165/38416", "0"],
        ["18957/33124", "1", "0", "0"],
        ["18957/66248", "1/2", "18957/38416", "169/196"],
        ["-49/169", "1/2", "-1/2", "169/196"],
        ["-49/169", "1/2", "1/2", "-169/196"],
    ],
    P=[
        ["-18957/38165", "19208/38165", "-1", "0", "-18957/38165", "-18957/38165", "0"],
        ["-33124/38165", "-1857786/6449885", "-98/169", "98/169", "-1857786/6449885", "359367849/1264177460", "38165/33124"],
        ["33124/38165", "33124/38165", "0", "0", "33124/38165", "33124/38165", "0"],
        ["-18957/38165", "-18957/38165", "0", "1", "19208/38165", "-18957/38165", "0"],
    ],
)

ALTBASIS_CORE = dict(
    L=[
        ["0", "0", "1", "-1"],
        ["0", "0", "1", "0"],
        ["0", "1", "0", "0"],
        ["-1", "0", "0", "0"],
        ["0", "0", "0", "1"],
        ["1", "0", "0", "1"],
        ["0", "1", "0", "1"],
    ],
    R=[
        ["1", "0", "0", "0"],
        ["0", "-1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "1", "-1"],
        ["0", "0", "0", "1"],
        ["1", "0", "0", "-1"],
        ["0", "1", "0", "1"],
    ],
    P=[
        ["0", "0", "0", "0", "0", "1", "1"],
        ["-1", "0", "1", "0", "0", "0", "0"],
        ["0", "1", "0", "1", "0", "0", "0"],
        ["1", "0", "0", "1", "1", "1", "0"],
    ],
)

ALTBASIS_COB = dict(
    phi=[
        ["0", "0", "0", "sqrt3*2/3"],
        ["0", "1", "0", "sqrt3/3"],
        ["0", "0", "1", "-sqrt3/3"],
        ["-sqrt3/2", "-1/2", "1/2", "-sqrt3/2"],
    ],
    psi=[
        ["0", "sqrt3*2/3", "0", "0"],
        ["1", "-sqrt3/3", "0", "0"],
        ["0", "sqrt3/3", "0", "-1"],
        ["-1/2", "sqrt3/2", "-sqrt3/2", "-1/2"],
    ],
    nu=[
        ["-sqrt3*2/3", "0", "0", "0"],
        ["sqrt3/3", "-1", "0", "0"],
        ["-sqrt3/3", "0", "-1", "0"],
        ["sqrt3/2", "-1/2", "1/2", "sqrt3/2"],
    ],
)
# fmt: on
