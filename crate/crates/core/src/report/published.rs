//! Published reference values for the standard comparison tables.
//!
//! Rows follow [`super::ShiftGrid::standard`] (table 5 stops at 3.0). In table 1
//! cells are `(ARL, SD)`, table 5 cells `(ARL, SIR)`, tables 2-4 rows are
//! `(ARL, [p5, p25, p50, p75, p95])`.

#![allow(clippy::approx_constant)]

/// Column order of table 1.
pub const TABLE1_SCHEMES: [&str; 14] = [
    "1/1", "2/2", "3/3", "4/4", "5/5", "M-2/3", "2/3", "M-2/4", "2/4", "M-3/4", "3/4", "M-2/5",
    "M-3/5", "M-4/5",
];

/// Printed control limits with the number of decimals they were printed to.
pub const TABLE1_LIMITS: [(f64, u32); 14] = [
    (3.0, 0),
    (1.781, 3),
    (1.2, 1),
    (0.832, 3),
    (0.568, 3),
    (1.866, 3),
    (1.929, 3),
    (1.897, 3),
    (2.011, 3),
    (1.312, 3),
    (1.393, 3),
    (1.91, 2),
    (1.358, 3),
    (0.949, 3),
];

pub const TABLE1_TARGET: f64 = 370.4;

/// Schemes of tables 2, 3 and 4.
pub const PERCENTILE_SCHEMES: [&str; 3] = ["M-2/5", "M-3/5", "M-4/5"];

pub const TABLE5_SCHEMES: [&str; 4] = ["C1234", "M-2/5", "M-3/5", "M-4/5"];

pub const TABLE5_LIMITS: [f64; 4] = [3.0, 1.57098, 1.04853, 0.652948];

/// In-control ARL printed in every table 5 column.
pub const TABLE5_TARGET: f64 = 94.57;

pub const TABLE1: [[(f64, f64); 14]; 18] = [
    [
        (370.40, 369.90),
        (370.40, 368.94),
        (370.40, 368.03),
        (370.40, 367.13),
        (370.40, 366.27),
        (370.40, 368.63),
        (370.40, 368.47),
        (370.40, 368.04),
        (370.40, 368.43),
        (370.40, 367.61),
        (370.40, 367.44),
        (370.40, 368.28),
        (370.40, 367.30),
        (370.40, 366.68),
    ],
    [
        (308.43, 307.93),
        (276.67, 275.22),
        (259.30, 256.96),
        (248.54, 245.34),
        (241.32, 237.28),
        (264.79, 263.03),
        (270.10, 268.20),
        (257.81, 264.64),
        (266.96, 255.82),
        (243.10, 240.35),
        (248.65, 245.76),
        (253.39, 251.24),
        (233.55, 230.48),
        (231.24, 227.61),
    ],
    [
        (200.10, 199.58),
        (150.25, 148.82),
        (129.55, 127.26),
        (118.70, 115.96),
        (112.26, 108.37),
        (134.92, 133.18),
        (141.61, 139.78),
        (126.61, 135.58),
        (137.81, 124.63),
        (112.01, 109.34),
        (117.78, 115.01),
        (121.52, 119.35),
        (102.82, 99.83),
        (101.68, 98.18),
    ],
    [
        (119.67, 119.16),
        (78.91, 77.51),
        (65.25, 63.02),
        (58.99, 55.98),
        (55.71, 51.95),
        (67.89, 66.18),
        (72.64, 70.86),
        (62.24, 67.99),
        (70.12, 60.29),
        (53.79, 51.21),
        (57.48, 54.83),
        (58.85, 56.70),
        (48.26, 45.37),
        (48.34, 44.98),
    ],
    [
        (71.55, 71.05),
        (43.63, 42.25),
        (35.76, 33.59),
        (32.63, 29.71),
        (31.28, 27.63),
        (36.64, 34.97),
        (39.64, 37.92),
        (33.22, 36.15),
        (38.18, 31.33),
        (28.83, 26.34),
        (31.04, 28.49),
        (31.21, 29.12),
        (25.71, 22.93),
        (26.28, 23.03),
    ],
    [
        (43.90, 43.39),
        (25.78, 24.42),
        (21.45, 19.34),
        (20.06, 17.20),
        (19.72, 16.13),
        (21.44, 18.82),
        (23.30, 21.64),
        (19.42, 20.57),
        (22.50, 17.59),
        (17.23, 14.82),
        (18.57, 16.11),
        (18.26, 16.25),
        (15.46, 12.78),
        (16.18, 13.03),
    ],
    [
        (27.82, 27.32),
        (16.28, 19.94),
        (14.00, 11.92),
        (13.54, 10.73),
        (13.72, 10.18),
        (13.56, 11.99),
        (14.73, 13.12),
        (12.37, 12.45),
        (14.30, 10.60),
        (11.36, 9.00),
        (12.18, 9.80),
        (11.70, 9.77),
        (10.32, 7.72),
        (11.09, 7.98),
    ],
    [
        (18.25, 17.74),
        (10.94, 9.62),
        (9.85, 7.79),
        (9.91, 7.11),
        (10.37, 6.82),
        (9.21, 7.67),
        (9.96, 8.40),
        (8.49, 7.97),
        (9.74, 6.78),
        (8.14, 5.82),
        (8.67, 6.33),
        (8.11, 6.25),
        (7.53, 4.98),
        (8.30, 5.20),
    ],
    [
        (12.38, 11.87),
        (7.79, 6.48),
        (7.41, 5.35),
        (7.77, 4.95),
        (8.39, 4.80),
        (6.67, 5.15),
        (7.16, 5.63),
        (6.23, 5.34),
        (7.06, 4.56),
        (6.26, 3.95),
        (6.62, 4.28),
        (6.02, 4.21),
        (5.90, 3.37),
        (6.67, 3.55),
    ],
    [
        (8.70, 8.18),
        (5.85, 4.54),
        (5.89, 3.82),
        (6.44, 3.58),
        (7.16, 3.49),
        (5.10, 3.60),
        (5.43, 3.92),
        (4.84, 3.72),
        (5.40, 3.19),
        (5.11, 2.78),
        (5.35, 3.01),
        (4.72, 2.96),
        (4.91, 2.36),
        (5.69, 2.50),
    ],
    [
        (6.30, 5.78),
        (4.61, 3.29),
        (4.92, 2.81),
        (5.59, 2.66),
        (6.38, 2.60),
        (4.10, 2.60),
        (4.33, 2.82),
        (3.95, 2.67),
        (4.33, 2.31),
        (4.38, 2.01),
        (4.55, 2.17),
        (3.89, 2.15),
        (4.27, 1.70),
        (5.07, 1.80),
    ],
    [
        (4.70, 4.19),
        (3.79, 2.45),
        (4.28, 2.12),
        (5.03, 2.01),
        (5.87, 1.97),
        (3.44, 1.93),
        (3.60, 2.09),
        (3.35, 1.97),
        (3.62, 1.71),
        (3.91, 1.47),
        (4.02, 1.59),
        (3.33, 1.61),
        (3.85, 1.26),
        (4.67, 1.31),
    ],
    [
        (3.65, 3.11),
        (3.23, 1.87),
        (3.85, 1.63),
        (4.66, 1.54),
        (5.54, 1.50),
        (2.99, 1.45),
        (3.10, 1.57),
        (2.95, 1.49),
        (3.14, 1.30),
        (3.59, 1.10),
        (3.68, 1.18),
        (2.94, 1.24),
        (3.57, 0.95),
        (4.42, 0.96),
    ],
    [
        (2.90, 2.35),
        (2.85, 1.45),
        (3.56, 1.26),
        (4.42, 1.19),
        (5.33, 1.15),
        (2.68, 1.11),
        (2.76, 1.20),
        (2.66, 1.14),
        (2.80, 1.00),
        (3.39, 0.82),
        (3.44, 0.88),
        (2.66, 0.97),
        (3.38, 0.72),
        (4.26, 0.70),
    ],
    [
        (2.38, 1.81),
        (2.58, 1.13),
        (3.36, 0.98),
        (4.26, 0.91),
        (5.20, 0.87),
        (2.47, 0.86),
        (2.52, 0.93),
        (2.46, 0.89),
        (2.56, 0.79),
        (3.25, 0.62),
        (3.29, 0.66),
        (2.46, 0.77),
        (3.25, 0.56),
        (4.16, 0.52),
    ],
    [
        (2.00, 1.41),
        (2.39, 0.89),
        (3.23, 0.76),
        (4.16, 0.70),
        (5.11, 0.66),
        (2.32, 0.67),
        (2.36, 0.72),
        (2.32, 0.70),
        (2.39, 0.62),
        (3.16, 0.46),
        (3.18, 0.50),
        (2.32, 0.62),
        (3.16, 0.44),
        (4.09, 0.38),
    ],
    [
        (1.45, 0.80),
        (2.14, 0.24),
        (3.07, 0.40),
        (4.04, 0.34),
        (5.03, 0.31),
        (2.11, 0.36),
        (2.13, 0.39),
        (2.12, 0.35),
        (2.15, 0.40),
        (3.05, 0.23),
        (3.05, 0.25),
        (2.12, 0.36),
        (3.05, 0.23),
        (4.02, 0.17),
    ],
    [
        (1.19, 0.47),
        (2.04, 0.07),
        (3.02, 0.19),
        (4.01, 0.15),
        (5.00, 0.13),
        (2.03, 0.19),
        (2.04, 0.20),
        (2.04, 0.19),
        (2.05, 0.22),
        (3.01, 0.11),
        (3.01, 0.12),
        (2.04, 0.20),
        (3.01, 0.11),
        (4.00, 0.07),
    ],
];

pub const TABLE2: [(f64, [u64; 5]); 18] = [
    (370.40, [21, 108, 257, 513, 1105]),
    (253.30, [15, 74, 176, 350, 755]),
    (121.52, [8, 37, 85, 168, 360]),
    (58.85, [5, 18, 41, 81, 172]),
    (31.21, [4, 10, 22, 42, 89]),
    (18.26, [3, 7, 13, 25, 51]),
    (11.70, [2, 5, 9, 15, 31]),
    (8.11, [2, 4, 6, 11, 21]),
    (6.02, [2, 3, 5, 8, 14]),
    (4.72, [2, 3, 4, 6, 11]),
    (3.89, [2, 2, 3, 5, 8]),
    (3.33, [2, 2, 3, 4, 6]),
    (2.94, [2, 2, 3, 3, 5]),
    (2.66, [2, 2, 2, 3, 5]),
    (2.46, [2, 2, 2, 3, 4]),
    (2.32, [2, 2, 2, 3, 4]),
    (2.12, [2, 2, 2, 2, 3]),
    (2.04, [2, 2, 2, 2, 2]),
];

pub const TABLE3: [(f64, [u64; 5]); 18] = [
    (370.40, [22, 109, 258, 512, 1103]),
    (233.55, [15, 69, 163, 323, 694]),
    (102.82, [8, 32, 72, 141, 302]),
    (48.26, [4, 16, 34, 66, 139]),
    (25.71, [4, 9, 19, 35, 71]),
    (15.46, [3, 6, 11, 20, 41]),
    (10.32, [3, 5, 8, 13, 26]),
    (7.53, [3, 4, 6, 9, 18]),
    (5.90, [3, 4, 5, 7, 13]),
    (4.91, [3, 3, 4, 5, 10]),
    (4.27, [3, 3, 4, 5, 8]),
    (3.85, [3, 3, 3, 4, 6]),
    (3.57, [3, 3, 3, 4, 6]),
    (3.38, [3, 3, 3, 4, 5]),
    (3.25, [3, 3, 3, 3, 4]),
    (3.16, [3, 3, 3, 3, 4]),
    (3.05, [3, 3, 3, 3, 3]),
    (3.01, [3, 3, 3, 3, 3]),
];

pub const TABLE4: [(f64, [u64; 5]); 18] = [
    (370.40, [23, 109, 258, 512, 1102]),
    (231.24, [15, 69, 161, 319, 685]),
    (101.68, [9, 32, 72, 140, 298]),
    (48.34, [6, 16, 35, 66, 138]),
    (26.28, [5, 10, 19, 35, 72]),
    (16.18, [4, 7, 12, 21, 42]),
    (11.09, [4, 5, 9, 14, 27]),
    (8.30, [4, 5, 6, 10, 19]),
    (6.67, [4, 4, 5, 8, 14]),
    (5.69, [4, 4, 5, 6, 11]),
    (5.07, [4, 4, 4, 5, 9]),
    (4.67, [4, 4, 4, 5, 8]),
    (4.42, [4, 4, 4, 5, 6]),
    (4.26, [4, 4, 4, 4, 5]),
    (4.16, [4, 4, 4, 4, 5]),
    (4.09, [4, 4, 4, 4, 5]),
    (4.02, [4, 4, 4, 4, 4]),
    (4.00, [4, 4, 4, 4, 4]),
];

pub const TABLE5: [[(f64, f64); 4]; 16] = [
    [
        (94.57, 50.00),
        (94.57, 50.50),
        (94.57, 50.50),
        (94.57, 50.00),
    ],
    [
        (66.99, 34.50),
        (72.28, 38.50),
        (69.51, 36.50),
        (69.96, 36.50),
    ],
    [
        (36.54, 18.00),
        (41.51, 22.00),
        (38.27, 19.50),
        (39.16, 19.50),
    ],
    [
        (20.88, 10.00),
        (23.62, 12.00),
        (21.65, 10.50),
        (22.65, 10.50),
    ],
    [(13.24, 5.50), (14.45, 7.00), (13.51, 6.00), (14.49, 6.50)],
    [(9.22, 3.50), (9.59, 4.50), (9.28, 3.50), (10.22, 4.00)],
    [(6.89, 2.00), (6.86, 3.00), (6.92, 2.50), (7.82, 3.00)],
    [(5.42, 2.00), (5.22, 1.50), (5.53, 2.00), (6.40, 2.00)],
    [(4.41, 1.00), (4.20, 1.50), (4.66, 1.00), (5.52, 1.00)],
    [(3.68, 1.50), (3.53, 1.00), (4.10, 1.00), (4.96, 0.50)],
    [(3.13, 1.00), (3.07, 1.00), (3.74, 0.50), (4.61, 0.50)],
    [(2.70, 1.00), (2.75, 0.50), (3.49, 0.50), (4.38, 0.00)],
    [(2.35, 0.50), (2.53, 0.50), (3.32, 0.00), (4.23, 0.00)],
    [(2.07, 1.00), (2.36, 0.50), (3.21, 0.00), (4.14, 0.00)],
    [(1.85, 0.50), (2.25, 0.00), (3.13, 0.00), (4.08, 0.00)],
    [(1.67, 0.50), (2.17, 0.00), (3.08, 0.00), (4.05, 0.00)],
];
