//! Rankin columns transcribed from the published tables.

/// Complex projective packings: (d, N, bound in degrees, two decimals).
pub const LINES_DEGREES: &[(usize, usize, f64)] = &[
    (2, 3, 60.00),
    (2, 4, 54.74),
    (2, 5, 52.24),
    (2, 6, 50.77),
    (2, 7, 49.80),
    (2, 8, 49.11),
    (3, 4, 70.53),
    (3, 5, 65.91),
    (3, 6, 63.43),
    (3, 7, 61.87),
    (3, 8, 60.79),
    (3, 9, 60.00),
    (3, 10, 59.39),
    (3, 11, 58.91),
    (3, 12, 58.52),
    (3, 13, 58.19),
    (3, 14, 57.92),
    (3, 15, 57.69),
    (3, 16, 57.49),
    (3, 17, 57.31),
    (3, 18, 57.16),
    (3, 19, 57.02),
    (3, 20, 56.90),
    (4, 5, 75.52),
    (4, 6, 71.57),
    (4, 7, 69.30),
    (4, 8, 67.79),
    (4, 9, 66.72),
    (4, 10, 65.91),
    (4, 11, 65.27),
    (4, 12, 64.76),
    (4, 13, 64.34),
    (4, 14, 63.99),
    (4, 15, 63.69),
    (4, 16, 63.43),
    (4, 17, 63.21),
    (4, 18, 63.02),
    (4, 19, 62.84),
    (4, 20, 62.69),
    (5, 6, 78.46),
    (5, 7, 75.04),
    (5, 8, 72.98),
    (5, 9, 71.57),
    (5, 10, 70.53),
    (5, 11, 69.73),
    (5, 12, 69.10),
    (5, 13, 68.58),
    (5, 14, 68.15),
    (5, 15, 67.79),
    (5, 16, 67.48),
    (5, 17, 67.21),
    (5, 18, 66.98),
    (5, 19, 66.77),
    (5, 20, 66.59),
    (5, 21, 66.42),
    (5, 22, 66.27),
    (5, 23, 66.14),
    (5, 24, 66.02),
    (5, 25, 65.91),
];

/// Complex chordal packings: (K, d, N, squared bound, four decimals).
pub const CHORDAL: &[(usize, usize, usize, f64)] = &[
    (2, 4, 3, 1.5000),
    (2, 4, 4, 1.3333),
    (2, 4, 5, 1.2500),
    (2, 4, 6, 1.2000),
    (2, 4, 7, 1.1667),
    (2, 4, 8, 1.1429),
    (2, 4, 9, 1.1250),
    (2, 4, 10, 1.1111),
    (2, 4, 11, 1.1000),
    (2, 4, 12, 1.0909),
    (2, 4, 13, 1.0833),
    (2, 4, 14, 1.0769),
    (2, 4, 15, 1.0714),
    (2, 4, 16, 1.0667),
    (2, 4, 17, 1.0625),
    (2, 4, 18, 1.0588),
    (2, 4, 19, 1.0556),
    (2, 4, 20, 1.0526),
    (2, 5, 3, 1.8000),
    (2, 5, 4, 1.6000),
    (2, 5, 5, 1.5000),
    (2, 5, 6, 1.4400),
    (2, 5, 7, 1.4000),
    (2, 5, 8, 1.3714),
    (2, 5, 9, 1.3500),
    (2, 5, 10, 1.3333),
    (2, 5, 11, 1.3200),
    (2, 5, 12, 1.3091),
    (2, 5, 13, 1.3000),
    (2, 5, 14, 1.2923),
    (2, 5, 15, 1.2857),
    (2, 5, 16, 1.2800),
    (2, 5, 17, 1.2750),
    (2, 5, 18, 1.2706),
    (2, 5, 19, 1.2667),
    (2, 5, 20, 1.2632),
    (2, 6, 4, 1.7778),
    (2, 6, 5, 1.6667),
    (2, 6, 6, 1.6000),
    (2, 6, 7, 1.5556),
    (2, 6, 8, 1.5238),
    (2, 6, 9, 1.5000),
    (2, 6, 10, 1.4815),
    (2, 6, 11, 1.4667),
    (2, 6, 12, 1.4545),
    (2, 6, 13, 1.4444),
    (2, 6, 14, 1.4359),
    (2, 6, 15, 1.4286),
    (2, 6, 16, 1.4222),
    (2, 6, 17, 1.4167),
    (2, 6, 18, 1.4118),
    (2, 6, 19, 1.4074),
    (2, 6, 20, 1.4035),
    (2, 6, 21, 1.4000),
    (2, 6, 22, 1.3968),
    (2, 6, 23, 1.3939),
    (2, 6, 24, 1.3913),
    (2, 6, 25, 1.3889),
    (3, 6, 3, 2.2500),
    (3, 6, 4, 2.0000),
    (3, 6, 5, 1.8750),
    (3, 6, 6, 1.8000),
    (3, 6, 7, 1.7500),
    (3, 6, 8, 1.7143),
    (3, 6, 9, 1.6875),
    (3, 6, 10, 1.6667),
    (3, 6, 11, 1.6500),
    (3, 6, 12, 1.6364),
    (3, 6, 13, 1.6250),
    (3, 6, 14, 1.6154),
    (3, 6, 15, 1.6071),
    (3, 6, 16, 1.6000),
    (3, 6, 17, 1.5938),
    (3, 6, 18, 1.5882),
    (3, 6, 19, 1.5833),
    (3, 6, 20, 1.5789),
    (3, 6, 21, 1.5750),
    (3, 6, 22, 1.5714),
    (3, 6, 23, 1.5682),
    (3, 6, 24, 1.5652),
    (3, 6, 25, 1.5625),
    (3, 6, 26, 1.5600),
    (3, 6, 27, 1.5577),
    (3, 6, 28, 1.5556),
    (3, 6, 29, 1.5536),
    (3, 6, 30, 1.5517),
    (3, 6, 31, 1.5500),
    (3, 6, 32, 1.5484),
    (3, 6, 33, 1.5469),
    (3, 6, 34, 1.5455),
    (3, 6, 35, 1.5441),
    (3, 6, 36, 1.5429),
];

/// Spectral packings: (d, K, N, squared bound, four decimals).
pub const SPECTRAL: &[(usize, usize, usize, f64)] = &[
    (4, 2, 3, 0.7500),
    (4, 2, 4, 0.6667),
    (4, 2, 5, 0.6250),
    (4, 2, 6, 0.6000),
    (4, 2, 7, 0.5833),
    (4, 2, 8, 0.5714),
    (4, 2, 9, 0.5625),
    (4, 2, 10, 0.5556),
    (5, 2, 3, 0.9000),
    (5, 2, 4, 0.8000),
    (5, 2, 5, 0.7500),
    (5, 2, 6, 0.7200),
    (5, 2, 7, 0.7000),
    (5, 2, 8, 0.6857),
    (5, 2, 9, 0.6750),
    (5, 2, 10, 0.6667),
    (6, 2, 4, 0.8889),
    (6, 2, 5, 0.8333),
    (6, 2, 6, 0.8000),
    (6, 2, 7, 0.7778),
    (6, 2, 8, 0.7619),
    (6, 2, 9, 0.7500),
    (6, 2, 10, 0.7407),
    (6, 2, 11, 0.7333),
    (6, 2, 12, 0.7273),
    (6, 3, 3, 0.7500),
    (6, 3, 4, 0.6667),
    (6, 3, 5, 0.6250),
    (6, 3, 6, 0.6000),
    (6, 3, 7, 0.5833),
    (6, 3, 8, 0.5714),
    (6, 3, 9, 0.5625),
];
