"""Published reference values used by the comparison harness.

Counts and ratios are transcribed verbatim; printed decimals are kept at
their printed precision, so tolerances are applied by the caller.
"""

from __future__ import annotations

from fractions import Fraction as F

# last-digit pairs of consecutive primes, first 10**8 primes, base 10
PAIR_COUNTS_1E8 = {
    (1, 1): 4623042, (1, 3): 7429438, (1, 7): 7504612, (1, 9): 5442345,
    (3, 1): 6010982, (3, 3): 4442562, (3, 7): 7043695, (3, 9): 7502896,
    (7, 1): 6373981, (7, 3): 6755195, (7, 7): 4439355, (7, 9): 7431870,
    (9, 1): 7991431, (9, 3): 6372941, (9, 7): 6012739, (9, 9): 4622916,
}  # fmt: skip

# class sums and W_h of the table above
OBSERVED_CLASS_SUMS = {2: 22852739, 4: 19790617, 6: 21762703, 8: 17466066, 0: 18127875}
OBSERVED_RATIOS = {2: 1.0, 4: 0.866006, 6: 0.952302, 8: 0.764288, 0: 0.793247}

# G(5#) and G(7#) starting at the gap after 1
CYCLE_5 = (6, 4, 2, 4, 2, 4, 6, 2)
CYCLE_7 = (
    10, 2, 4, 2, 4, 6, 2, 6, 4, 2, 4, 6, 6, 2, 6, 4, 2, 6, 4, 6, 8, 4, 2, 4,
    2, 4, 8, 6, 4, 6, 2, 4, 6, 2, 6, 6, 4, 2, 4, 6, 2, 6, 4, 2, 4, 2, 10, 2,
)  # fmt: skip

# driving terms at 37#: g -> (n_{g,1..4}, w_{g,1}(37#), w_g(inf))
CENSUS_37 = {
    2: ((217929355875, 0, 0, 0), 1.0, F(1)),
    4: ((217929355875, 0, 0, 0), 1.0, F(1)),
    6: ((293920842950, 141937868800, 0, 0), 1.348698, F(2)),
    8: ((91589444450, 110741954050, 15597957375, 0), 0.420271, F(1)),
    10: ((108861586050, 150514973700, 31195914750, 0), 0.499527, F(4, 3)),
    12: ((83462164156, 219604134932, 121198832118, 11593580544), 0.382978, F(2)),
    14: ((83462164156, 115853913448, 93409823052, 17390370816), 0.159965, F(6, 5)),
    16: ((16996070868, 78769359396, 91933104354, 28714181132), 0.077989, F(1)),
    18: ((21218333416, 122467715552, 191942799048, 91130022084), 0.097363, F(2)),
    20: ((4814320320, 43021526040, 111304219860, 100872302880), 0.022091, F(4, 3)),
    22: ((5454179550, 39892554000, 93242799000, 81714578400), 0.025027, F(10, 9)),
    24: ((4073954144, 40186134868, 126323098182, 162790595856), 0.018694, F(2)),
    26: ((918069454, 12091107788, 51322797162, 88711954896), 0.004213, F(12, 11)),
    28: ((857901000, 12427836600, 55357035900, 98053394600), 0.003937, F(6, 5)),
    30: ((535673924, 10415825728, 65248580472, 171951637976), 0.002458, F(8, 3)),
    32: ((58664256, 1599900552, 13444986588, 46806142904), 0.000269, F(1)),
    34: ((69404898, 1684816476, 13621926834, 47836532832), 0.000318, F(16, 15)),
    36: ((46346428, 1439916356, 14571970374, 64004385832), 0.000213, F(2)),
    38: ((7381190, 318303280, 4219159800, 23451227440), 0.000034, F(18, 17)),
    40: ((10176048, 359222796, 4396494114, 24594847992), 0.000047, F(4, 3)),
    42: ((4153336, 201583172, 3188901438, 22696587504), 0.000019, F(12, 5)),
    44: ((526596, 37126032, 772483368, 6703381264), 0.000002, F(10, 9)),
    46: ((291342, 21296376, 459181188, 4284667104), 0.000001, F(22, 21)),
    48: ((239760, 19964064, 493227744, 5290003952), 0.000001, F(2)),
    50: ((91392, 7454520, 183370572, 2026286376), 4.2e-7, F(4, 3)),
    52: ((8912, 1337188, 52081950, 819360400), 4.1e-8, F(12, 11)),
    54: ((25320, 2992860, 97569690, 1348117880), 1.2e-7, F(2)),
    56: ((2952, 422196, 18140238, 326084664), 1.4e-8, F(6, 5)),
    58: ((1654, 307068, 14158938, 264266960), 7.6e-9, F(28, 27)),
    60: ((452, 110300, 6862242, 173593136), 2.1e-9, F(8, 3)),
    62: ((26, 8248, 645804, 19784976), 1.2e-10, F(30, 29)),
    64: ((48, 12528, 890688, 25971336), 2.2e-10, F(1)),
    66: ((24, 6744, 545796, 18824896), 1.1e-10, F(20, 9)),
}
CENSUS_37_VALIDATED = 26  # largest g asserted against CENSUS_37

# gaps g < 100 by class mod 10: h -> [(g, w_g(inf), running mean mu_h)]
CLASS_MEANS_10 = {
    0: [(10, F(4, 3), 1.333), (20, F(4, 3), 1.333), (30, F(8, 3), 1.777), (40, F(4, 3), 1.666),
        (50, F(4, 3), 1.600), (60, F(8, 3), 1.777), (70, F(8, 5), 1.752), (80, F(4, 3), 1.700),
        (90, F(8, 3), 1.807)],
    2: [(2, F(1), 1.000), (12, F(2), 1.500), (22, F(10, 9), 1.370), (32, F(1), 1.277),
        (42, F(12, 5), 1.502), (52, F(12, 11), 1.433), (62, F(30, 29), 1.376), (72, F(2), 1.454),
        (82, F(40, 39), 1.406), (92, F(22, 21), 1.370)],
    4: [(4, F(1), 1.000), (14, F(6, 5), 1.100), (24, F(2), 1.400), (34, F(16, 15), 1.316),
        (44, F(10, 9), 1.275), (54, F(2), 1.396), (64, F(1), 1.339), (74, F(36, 35), 1.300),
        (84, F(12, 5), 1.422), (94, F(46, 45), 1.382)],
    6: [(6, F(2), 2.000), (16, F(1), 1.500), (26, F(12, 11), 1.363), (36, F(2), 1.522),
        (46, F(22, 21), 1.427), (56, F(6, 5), 1.389), (66, F(20, 9), 1.508), (76, F(18, 17), 1.452),
        (86, F(42, 41), 1.404), (96, F(2), 1.464)],
    8: [(8, F(1), 1.000), (18, F(2), 1.500), (28, F(6, 5), 1.400), (38, F(18, 17), 1.314),
        (48, F(2), 1.451), (58, F(28, 27), 1.382), (68, F(16, 15), 1.337), (78, F(24, 11), 1.443),
        (88, F(10, 9), 1.406), (98, F(6, 5), 1.385)],
}  # fmt: skip

# class tables over g = 2..420: base -> h -> (pairs, W_h(1993#), W_h(inf))
CLASS_TABLES = {
    10: {
        2: (((1, 3), (7, 9), (9, 1)), None, 1.0),
        4: (((3, 7), (7, 1), (9, 3)), None, 1.0007),
        6: (((1, 7), (3, 9), (7, 3)), None, 1.0029),
        8: (((1, 9), (3, 1), (9, 7)), None, 1.0026),
        0: (((1, 1), (3, 3), (7, 7), (9, 9)), None, 1.3192),
    },
    3: {
        2: (((2, 1),), 1.0, 1.0),
        1: (((1, 2),), 1.0009, 1.0010),
        0: (((1, 1), (2, 2)), 1.6358, 1.9868),
    },
    8: {
        2: (((1, 3), (3, 5), (5, 7), (7, 1)), 1.0, 1.0),
        4: (((1, 5), (5, 1), (3, 7), (7, 3)), 0.9695, 1.0185),
        6: (((1, 7), (7, 5), (5, 3), (3, 1)), 1.0086, 1.0003),
        0: (((1, 1), (3, 3), (5, 5), (7, 7)), 0.7081, 0.9676),
    },
    30: {
        2: (((29, 1), (11, 13), (17, 19)), 1.0, 1.0),
        4: (((7, 11), (13, 17), (19, 23)), 1.0180, 1.0019),
        6: (((1, 7), (7, 13), (13, 19), (11, 17), (17, 23), (23, 29)), 1.7771, 2.0021),
        8: (((11, 19), (23, 1), (29, 7)), 0.8154, 1.0000),
        10: (((1, 11), (7, 17), (13, 23), (19, 29)), 1.0421, 1.3245),
        12: (((1, 13), (7, 19), (11, 23), (17, 29), (19, 1), (29, 11)), 1.4228, 1.9918),
        14: (((17, 1), (23, 7), (29, 13)), 0.7501, 1.0028),
        16: (((1, 17), (7, 23), (13, 29)), 0.5890, 1.0015),
        18: (((1, 19), (11, 29), (13, 1), (19, 7), (23, 11), (29, 17)), 1.0775, 1.9956),
        20: (((11, 1), (17, 7), (23, 13), (29, 19)), 0.6116, 1.3287),
        22: (((1, 23), (7, 29), (19, 11)), 0.5109, 1.0020),
        24: (((7, 1), (13, 7), (19, 13), (17, 11), (23, 17), (29, 23)), 0.8031, 1.9920),
        26: (((11, 7), (17, 13), (23, 19)), 0.3920, 1.0019),
        28: (((1, 29), (13, 11), (19, 17)), 0.4122, 1.0086),
        0: (((1, 1), (7, 7), (11, 11), (13, 13), (17, 17), (19, 19), (23, 23), (29, 29)),
            0.7578, 2.6153),
    },
}
CLASS_TABLE_PRIME = 1993

# scalar claims about the decay parameter lambda = a_2^k measured from 37#
LAMBDA_AT_1E15 = 0.105
LAMBDA_420_TENTH = (0.0365, 1.12e45)
LAMBDA_420_CROSS = (0.01415, 3.57e87)
CROSSOVER_30 = 2e6
W30_AT_0105 = 1.976
