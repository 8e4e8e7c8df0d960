//! Golden values transcribed from the published tables.
//!
//! In the QR zeroed-time tables, zero marks cells on or above the diagonal.

/// Coarse-grain time steps, 15 x 6 tiles.
pub const COARSE_15X6_SAMEH_KUCK: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [2, 3, 0, 0, 0, 0],
    [3, 4, 5, 0, 0, 0],
    [4, 5, 6, 7, 0, 0],
    [5, 6, 7, 8, 9, 0],
    [6, 7, 8, 9, 10, 11],
    [7, 8, 9, 10, 11, 12],
    [8, 9, 10, 11, 12, 13],
    [9, 10, 11, 12, 13, 14],
    [10, 11, 12, 13, 14, 15],
    [11, 12, 13, 14, 15, 16],
    [12, 13, 14, 15, 16, 17],
    [13, 14, 15, 16, 17, 18],
    [14, 15, 16, 17, 18, 19],
];
pub const COARSE_15X6_FIBONACCI: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [5, 0, 0, 0, 0, 0],
    [4, 7, 0, 0, 0, 0],
    [4, 6, 9, 0, 0, 0],
    [3, 6, 8, 11, 0, 0],
    [3, 5, 8, 10, 13, 0],
    [3, 5, 7, 10, 12, 15],
    [2, 5, 7, 9, 12, 14],
    [2, 4, 7, 9, 11, 14],
    [2, 4, 6, 9, 11, 13],
    [2, 4, 6, 8, 11, 13],
    [1, 4, 6, 8, 10, 13],
    [1, 3, 6, 8, 10, 12],
    [1, 3, 5, 8, 10, 12],
    [1, 3, 5, 7, 10, 12],
];
pub const COARSE_15X6_GREEDY: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [4, 0, 0, 0, 0, 0],
    [3, 6, 0, 0, 0, 0],
    [3, 5, 8, 0, 0, 0],
    [2, 5, 7, 10, 0, 0],
    [2, 4, 7, 9, 12, 0],
    [2, 4, 6, 9, 11, 14],
    [2, 4, 6, 8, 10, 13],
    [1, 3, 5, 8, 10, 12],
    [1, 3, 5, 7, 9, 11],
    [1, 3, 5, 7, 9, 11],
    [1, 3, 4, 6, 8, 10],
    [1, 2, 4, 6, 8, 10],
    [1, 2, 4, 5, 7, 9],
    [1, 2, 3, 5, 6, 8],
];

/// Tiled (TT) zeroed times, 15 x 6 tiles.
pub const TILED_15X6_FLAT_TREE: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [6, 0, 0, 0, 0, 0],
    [8, 28, 0, 0, 0, 0],
    [10, 34, 50, 0, 0, 0],
    [12, 40, 56, 72, 0, 0],
    [14, 46, 62, 78, 94, 0],
    [16, 52, 68, 84, 100, 116],
    [18, 58, 74, 90, 106, 122],
    [20, 64, 80, 96, 112, 128],
    [22, 70, 86, 102, 118, 134],
    [24, 76, 92, 108, 124, 140],
    [26, 82, 98, 114, 130, 146],
    [28, 88, 104, 120, 136, 152],
    [30, 94, 110, 126, 142, 158],
    [32, 100, 116, 132, 148, 164],
];
pub const TILED_15X6_FIBONACCI: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [14, 0, 0, 0, 0, 0],
    [12, 48, 0, 0, 0, 0],
    [12, 46, 70, 0, 0, 0],
    [10, 42, 68, 92, 0, 0],
    [10, 40, 64, 90, 114, 0],
    [10, 40, 62, 86, 112, 136],
    [8, 36, 62, 84, 108, 134],
    [8, 34, 58, 84, 106, 130],
    [8, 34, 56, 80, 106, 128],
    [8, 34, 56, 78, 102, 128],
    [6, 28, 56, 78, 100, 122],
    [6, 28, 50, 78, 100, 122],
    [6, 28, 44, 72, 100, 122],
    [6, 22, 44, 60, 94, 116],
];
pub const TILED_15X6_GREEDY: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [12, 0, 0, 0, 0, 0],
    [10, 42, 0, 0, 0, 0],
    [10, 40, 64, 0, 0, 0],
    [8, 36, 62, 86, 0, 0],
    [8, 34, 56, 84, 106, 0],
    [8, 34, 56, 78, 102, 128],
    [8, 30, 52, 78, 100, 122],
    [6, 28, 50, 72, 100, 118],
    [6, 28, 50, 72, 94, 116],
    [6, 28, 50, 68, 94, 116],
    [6, 28, 44, 66, 88, 110],
    [6, 22, 44, 66, 88, 110],
    [6, 22, 44, 60, 82, 104],
    [6, 22, 38, 60, 76, 98],
];
pub const TILED_15X6_BINARY_TREE: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [6, 0, 0, 0, 0, 0],
    [8, 28, 0, 0, 0, 0],
    [6, 36, 56, 0, 0, 0],
    [10, 34, 70, 90, 0, 0],
    [6, 44, 68, 104, 124, 0],
    [8, 28, 78, 102, 138, 158],
    [6, 42, 62, 112, 136, 172],
    [12, 40, 76, 96, 146, 170],
    [6, 46, 74, 110, 130, 180],
    [8, 28, 80, 108, 144, 164],
    [6, 36, 56, 114, 142, 178],
    [10, 34, 64, 84, 148, 176],
    [6, 38, 62, 92, 112, 182],
    [8, 28, 66, 90, 114, 134],
];
pub const TILED_15X6_PLASMA_TREE_BS5: [[u32; 6]; 15] = [
    [0, 0, 0, 0, 0, 0],
    [6, 0, 0, 0, 0, 0],
    [8, 28, 0, 0, 0, 0],
    [10, 34, 50, 0, 0, 0],
    [12, 40, 56, 72, 0, 0],
    [14, 46, 62, 78, 94, 0],
    [6, 54, 74, 90, 106, 122],
    [8, 28, 82, 102, 118, 134],
    [10, 34, 50, 110, 130, 146],
    [12, 40, 56, 72, 138, 158],
    [16, 52, 68, 84, 100, 166],
    [6, 56, 80, 96, 112, 128],
    [8, 28, 84, 108, 124, 140],
    [10, 34, 50, 112, 136, 152],
    [12, 40, 56, 72, 140, 164],
];

/// Zeroed times, 15 x 3 tiles, Greedy then Asap.
pub const GREEDY_15X3: [[u32; 3]; 15] = [
    [0, 0, 0],
    [12, 0, 0],
    [10, 42, 0],
    [10, 40, 64],
    [8, 36, 62],
    [8, 34, 56],
    [8, 34, 56],
    [8, 30, 52],
    [6, 28, 50],
    [6, 28, 50],
    [6, 28, 50],
    [6, 28, 44],
    [6, 22, 44],
    [6, 22, 44],
    [6, 22, 38],
];
pub const ASAP_15X3: [[u32; 3]; 15] = [
    [0, 0, 0],
    [12, 0, 0],
    [10, 40, 0],
    [10, 36, 86],
    [8, 34, 80],
    [8, 32, 74],
    [8, 30, 68],
    [8, 28, 62],
    [6, 28, 56],
    [6, 26, 50],
    [6, 24, 46],
    [6, 24, 44],
    [6, 22, 44],
    [6, 22, 40],
    [6, 22, 38],
];

/// Critical paths `(p, q, greedy, asap)` for larger matrices.
pub const GREEDY_VS_ASAP: [(usize, usize, u64, u64); 10] = [
    (16, 16, 310, 310),
    (32, 16, 360, 402),
    (32, 32, 650, 656),
    (64, 16, 374, 588),
    (64, 32, 726, 844),
    (64, 64, 1342, 1354),
    (128, 16, 396, 966),
    (128, 32, 748, 1222),
    (128, 64, 1452, 1748),
    (128, 128, 2732, 2756),
];

/// The one entry of [`GREEDY_VS_ASAP`] whose Asap value our simulation does
/// not reproduce.
pub const ASAP_OUTLIER: (usize, usize) = (128, 64);

/// `p = 40` theoretical comparison: `(q, greedy, plasma_tree, best_bs, fibonacci)`.
pub const P40: [(usize, u64, u64, usize, u64); 40] = [
    (1, 16, 16, 1, 22),
    (2, 54, 60, 3, 72),
    (3, 74, 98, 5, 94),
    (4, 104, 132, 5, 116),
    (5, 126, 166, 5, 138),
    (6, 148, 198, 10, 160),
    (7, 170, 226, 10, 182),
    (8, 192, 254, 10, 204),
    (9, 214, 282, 10, 226),
    (10, 236, 310, 10, 248),
    (11, 258, 336, 20, 270),
    (12, 280, 358, 20, 292),
    (13, 302, 380, 20, 314),
    (14, 324, 402, 20, 336),
    (15, 346, 424, 20, 358),
    (16, 368, 446, 20, 380),
    (17, 390, 468, 20, 402),
    (18, 412, 490, 20, 424),
    (19, 432, 512, 20, 446),
    (20, 454, 534, 20, 468),
    (21, 476, 554, 20, 490),
    (22, 498, 570, 20, 512),
    (23, 520, 586, 20, 534),
    (24, 542, 602, 20, 556),
    (25, 564, 618, 20, 578),
    (26, 586, 634, 20, 600),
    (27, 608, 650, 20, 622),
    (28, 630, 666, 20, 644),
    (29, 652, 682, 20, 666),
    (30, 668, 698, 20, 688),
    (31, 684, 714, 20, 710),
    (32, 700, 730, 20, 732),
    (33, 716, 746, 20, 754),
    (34, 732, 762, 20, 776),
    (35, 748, 778, 20, 798),
    (36, 764, 794, 20, 820),
    (37, 780, 810, 20, 842),
    (38, 796, 826, 20, 862),
    (39, 812, 842, 20, 878),
    (40, 826, 856, 20, 892),
];

/// Cholesky bounds on 5 x 5 tiles: `(p, T_p, S_p, E_p)` to two decimals.
pub const BOUNDS_5X5: [(u64, &str, &str, &str); 10] = [
    (1, "125.00", "1.00", "1.00"),
    (2, "64.50", "1.94", "0.97"),
    (3, "45.33", "2.76", "0.92"),
    (4, "37.25", "3.36", "0.84"),
    (5, "35.00", "3.57", "0.71"),
    (6, "35.00", "3.57", "0.60"),
    (7, "35.00", "3.57", "0.51"),
    (8, "35.00", "3.57", "0.45"),
    (9, "35.00", "3.57", "0.40"),
    (10, "35.00", "3.57", "0.36"),
];

/// Lost Area of the 5 x 5 Cholesky ALAP profile: `(p, LA_p)`.
pub const LOST_AREA_5X5: [(u64, u64); 5] = [(1, 0), (2, 4), (3, 11), (4, 24), (5, 45)];

/// MaxCP makespans on 5 x 5 QR tiles for `procs = 1..=14`: ALAP-derived
/// GrASAP bound, then GrASAP, Greedy, Fibonacci and FlatTree.
pub const QR_5X5: [[u64; 5]; 14] = [
    [500, 500, 500, 500, 500],
    [255, 256, 256, 256, 256],
    [176, 178, 178, 178, 176],
    [138, 140, 140, 140, 140],
    [116, 118, 118, 118, 116],
    [102, 104, 104, 104, 104],
    [92, 94, 94, 94, 94],
    [86, 88, 88, 88, 88],
    [82, 84, 84, 86, 86],
    [80, 82, 82, 86, 86],
    [80, 80, 80, 86, 86],
    [80, 80, 80, 86, 86],
    [80, 80, 80, 86, 86],
    [80, 80, 80, 80, 86],
];

/// Cells of [`QR_5X5`] no lowest-id MaxCP schedule reproduces:
/// `(procs, column, simulated value)`.
pub const QR_5X5_UNMATCHED: [(usize, usize, u64); 3] = [(3, 4, 178), (5, 4, 118), (14, 3, 86)];

/// Tile order used by the Strassen flop tables.
pub const STRASSEN_NB: u64 = 200;

/// Strassen-Winograd task counts `(p, r, tasks)`.
pub const STRASSEN_TASKS: [(usize, u32, u64); 19] = [
    (4, 0, 64),
    (4, 1, 116),
    (8, 0, 512),
    (8, 1, 688),
    (8, 2, 1052),
    (16, 0, 4096),
    (16, 1, 4544),
    (16, 2, 5776),
    (16, 3, 8324),
    (32, 0, 32768),
    (32, 1, 32512),
    (32, 2, 35648),
    (32, 3, 44272),
    (32, 4, 62108),
    (64, 0, 262144),
    (64, 1, 244736),
    (64, 2, 242944),
    (64, 3, 264896),
    (64, 4, 325264),
];

/// `(p, r_min, Gflop Strassen-Winograd at r_min, Gflop tiled GEMM)` with
/// tiles of order [`STRASSEN_NB`].
pub const STRASSEN_FLOPS: [(usize, u32, f64, f64); 9] = [
    (4, 1, 8.96e-1, 1.02e0),
    (8, 1, 7.15e0, 8.18e0),
    (16, 1, 5.72e1, 6.55e1),
    (32, 1, 4.57e2, 5.24e2),
    (64, 2, 3.20e3, 4.19e3),
    (128, 3, 2.24e4, 3.35e4),
    (256, 4, 1.57e5, 2.68e5),
    (512, 5, 1.09e6, 2.14e6),
    (1024, 6, 7.69e6, 1.71e7),
];

/// 128 x 128 tiles: `(r, tasks, Gflop)`.
pub const STRASSEN_P128: [(u32, u64, f64); 7] = [
    (1, 1896448, 2.92e4),
    (2, 1774592, 2.56e4),
    (3, 1762048, 2.24e4),
    (4, 1915712, 1.96e4),
    (5, 2338288, 1.72e4),
    (6, 3212252, 1.51e4),
    (7, 4859338, 1.33e4),
];
