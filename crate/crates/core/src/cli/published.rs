//! Published reference values for the reproduction targets, transcribed
//! as printed. Rejection rates are in percent. Complete randomization rows
//! print `0.5 (0)` for the allocation, so only the adaptive rules carry
//! allocation mean and variance.

/// Wald-test tables (Tables 1 and 3): columns CR, ρ_N1, ρ_R1; allocation
/// columns ρ_N1, ρ_R1.
#[derive(Debug, Clone, Copy)]
pub struct WaldRow {
    pub p0: f64,
    pub p1: f64,
    pub rejection: [f64; 3],
    pub mean_prop: [f64; 2],
    pub var_prop: [f64; 2],
    pub ens: [f64; 3],
}

const fn wald(p0: f64, p1: f64, rejection: [f64; 3], mean_prop: [f64; 2], var_prop: [f64; 2], ens: [f64; 3]) -> WaldRow {
    WaldRow {
        p0,
        p1,
        rejection,
        mean_prop,
        var_prop,
        ens,
    }
}

/// Table 1: n = 50, two patients per arm burn-in, ERADE, no fallback.
pub const TABLE1: [WaldRow; 17] = [
    wald(0.1, 0.1, [5.0, 68.2, 68.1], [0.47, 0.46], [0.1477, 0.1471], [5.0, 5.0, 5.0]),
    wald(0.2, 0.2, [5.9, 82.2, 80.0], [0.46, 0.48], [0.1570, 0.1525], [10.0, 10.0, 10.0]),
    wald(0.3, 0.3, [6.3, 72.0, 66.8], [0.47, 0.48], [0.1432, 0.1336], [15.0, 15.0, 15.0]),
    wald(0.4, 0.4, [6.2, 64.7, 53.0], [0.47, 0.48], [0.132, 0.1063], [20.0, 20.0, 20.0]),
    wald(0.5, 0.5, [6.4, 61.9, 38.6], [0.47, 0.49], [0.1261, 0.0757], [25.0, 25.0, 25.0]),
    wald(0.6, 0.6, [6.0, 65.0, 26.6], [0.47, 0.49], [0.1326, 0.0490], [30.0, 30.0, 30.0]),
    wald(0.7, 0.7, [6.1, 71.9, 17.8], [0.47, 0.49], [0.1438, 0.0295], [35.0, 35.0, 35.0]),
    wald(0.8, 0.8, [6.1, 82.1, 10.6], [0.47, 0.49], [0.1567, 0.0127], [40.0, 40.0, 40.0]),
    wald(0.9, 0.9, [4.8, 68.3, 5.1], [0.47, 0.49], [0.1477, 0.0033], [45.0, 45.0, 45.0]),
    wald(0.2, 0.1, [17.5, 84.0, 82.9], [0.33, 0.32], [0.1308, 0.1308], [7.5, 8.3, 8.4]),
    wald(0.2, 0.3, [15.3, 80.0, 76.7], [0.55, 0.57], [0.1513, 0.1420], [12.5, 12.7, 12.9]),
    wald(0.2, 0.5, [65.4, 88.3, 84.9], [0.62, 0.71], [0.1342, 0.0907], [17.5, 19.3, 20.7]),
    wald(0.2, 0.7, [97.1, 98.3, 97.8], [0.56, 0.79], [0.1486, 0.0476], [22.5, 23.9, 29.8]),
    wald(0.7, 0.2, [97.2, 98.5, 97.9], [0.38, 0.19], [0.1408, 0.0408], [22.5, 25.5, 30.2]),
    wald(0.7, 0.4, [62.1, 85.9, 72.0], [0.52, 0.33], [0.1381, 0.0507], [27.5, 27.2, 30.0]),
    wald(0.7, 0.6, [13.9, 70.4, 26.6], [0.51, 0.45], [0.1394, 0.0372], [32.5, 32.5, 32.8]),
    wald(0.7, 0.8, [15.0, 78.9, 22.0], [0.38, 0.52], [0.1396, 0.0213], [37.5, 36.9, 37.6]),
];

/// Table 3: as Table 1 but sampling with equal probability whenever either
/// arm's variance estimate is zero. The (0.3, 0.3) ρ_R1 variance is printed
/// as "0.0.005".
pub const TABLE3: [WaldRow; 13] = [
    wald(0.1, 0.1, [5.0, 4.8, 4.0], [0.49, 0.49], [0.0036, 0.0044], [5.0, 5.0, 5.0]),
    wald(0.2, 0.2, [5.9, 8.2, 8.1], [0.49, 0.49], [0.0043, 0.0062], [10.0, 10.0, 10.0]),
    wald(0.3, 0.3, [6.3, 8.6, 9.0], [0.49, 0.49], [0.0023, 0.005], [15.0, 15.0, 15.0]),
    wald(0.4, 0.4, [6.2, 7.2, 8.2], [0.49, 0.49], [0.0008, 0.0032], [20.0, 20.0, 20.0]),
    wald(0.5, 0.5, [6.4, 7.1, 7.4], [0.49, 0.49], [0.0004, 0.0020], [25.0, 25.0, 25.0]),
    wald(0.6, 0.6, [6.0, 7.7, 6.2], [0.49, 0.49], [0.0007, 0.0013], [30.0, 30.0, 30.0]),
    wald(0.7, 0.7, [6.1, 8.6, 6.1], [0.49, 0.49], [0.0022, 0.0008], [35.0, 35.0, 35.0]),
    wald(0.8, 0.8, [6.1, 7.9, 6.3], [0.49, 0.49], [0.0042, 0.0005], [40.0, 40.0, 40.0]),
    wald(0.9, 0.9, [4.8, 4.7, 5.0], [0.49, 0.49], [0.0036, 0.0003], [45.0, 45.0, 45.0]),
    wald(0.2, 0.1, [17.5, 18.5, 17.7], [0.44, 0.44], [0.0036, 0.0049], [7.5, 7.8, 7.8]),
    wald(0.2, 0.3, [15.3, 18.1, 18.4], [0.53, 0.54], [0.0032, 0.0054], [12.5, 12.6, 12.7]),
    wald(0.2, 0.5, [65.4, 67.6, 68.5], [0.55, 0.61], [0.0022, 0.0036], [17.5, 18.2, 19.1]),
    wald(0.2, 0.7, [97.1, 97.3, 97.4], [0.53, 0.64], [0.0032, 0.0029], [22.5, 23.2, 26.0]),
];

/// Score-test table (Table 4): columns CR, ρ_N1, ρ_R1, ρⁿ_N0, ρⁿ_R0;
/// allocation columns without CR.
#[derive(Debug, Clone, Copy)]
pub struct ScoreRow {
    pub p0: f64,
    pub p1: f64,
    pub rejection: [f64; 5],
    pub mean_prop: [f64; 4],
    pub var_prop: [f64; 4],
    pub ens: [f64; 5],
}

const fn score(p0: f64, p1: f64, rejection: [f64; 5], mean_prop: [f64; 4], var_prop: [f64; 4], ens: [f64; 5]) -> ScoreRow {
    ScoreRow {
        p0,
        p1,
        rejection,
        mean_prop,
        var_prop,
        ens,
    }
}

const fn flat5(x: f64) -> [f64; 5] {
    [x; 5]
}

/// Table 4: n = 50, score test. The (0.2, 0.2) ρⁿ_R0 allocation repeats the
/// ρ_R1 cell next to it, apparently a transcription slip in the source.
pub const TABLE4: [ScoreRow; 13] = [
    score(0.1, 0.1, [4.6, 0.3, 0.1, 6.8, 6.0], [0.47, 0.46, 0.49, 0.49], [0.1477, 0.1471, 0.0047, 0.0036], flat5(5.0)),
    score(0.2, 0.2, [5.5, 2.9, 0.4, 5.0, 5.2], [0.46, 0.48, 0.49, 0.48], [0.1568, 0.1525, 0.0033, 0.1525], flat5(10.0)),
    score(0.3, 0.3, [5.6, 6.7, 1.2, 4.9, 4.7], [0.47, 0.48, 0.49, 0.49], [0.1432, 0.1336, 0.0015, 0.0005], flat5(15.0)),
    score(0.4, 0.4, [6.2, 7.0, 2.9, 5.3, 4.8], [0.47, 0.48, 0.49, 0.49], [0.132, 0.1063, 0.0006, 0.0005], flat5(20.0)),
    score(0.5, 0.5, [6.0, 6.7, 5.4, 5.5, 4.6], [0.47, 0.49, 0.49, 0.49], [0.1261, 0.0757, 0.0003, 0.0017], flat5(25.0)),
    score(0.6, 0.6, [5.5, 7.2, 8.6, 5.3, 5.0], [0.47, 0.49, 0.49, 0.49], [0.1326, 0.0490, 0.0006, 0.0040], flat5(30.0)),
    score(0.7, 0.7, [5.6, 6.7, 13.2, 4.8, 5.5], [0.47, 0.49, 0.49, 0.49], [0.1437, 0.0293, 0.0015, 0.0074], flat5(35.0)),
    score(0.8, 0.8, [5.6, 3.2, 10.3, 5.3, 6.8], [0.47, 0.49, 0.49, 0.48], [0.1567, 0.0127, 0.0033, 0.0126], flat5(40.0)),
    score(0.9, 0.9, [5.1, 0.3, 5.5, 6.1, 7.9], [0.47, 0.49, 0.49, 0.47], [0.1477, 0.0033, 0.0047, 0.0145], flat5(45.0)),
    score(0.2, 0.1, [17.2, 1.5, 0.5, 17.4, 18.6], [0.32, 0.32, 0.54, 0.53], [0.1324, 0.1296, 0.0041, 0.0028], [7.5, 8.4, 8.4, 7.3, 7.4]),
    score(0.2, 0.3, [13.9, 7.0, 2.1, 12.5, 12.1], [0.56, 0.58, 0.46, 0.47], [0.1488, 0.1391, 0.0023, 0.0011], [12.6, 12.8, 12.9, 12.3, 12.4]),
    score(0.2, 0.5, [64.1, 35.4, 24.7, 60.7, 60.0], [0.62, 0.71, 0.43, 0.50], [0.1337, 0.0913, 0.0016, 0.0020], [17.5, 19.4, 20.8, 16.5, 17.6]),
    score(0.2, 0.7, [97.0, 84.2, 80.3, 96.4, 96.2], [0.55, 0.79, 0.46, 0.60], [0.1494, 0.0472, 0.0023, 0.0050], [22.5, 23.8, 29.8, 21.5, 25.1]),
];

/// Burn-in table (Table 2): columns Agresti–Caffo ρ_N1, ρ_R1 (two patients
/// per arm), then ρ_N1, ρ_R1 for each of two burn-in sizes, all Wald.
#[derive(Debug, Clone, Copy)]
pub struct BurnInRow {
    pub p0: f64,
    pub p1: f64,
    pub rejection: [f64; 6],
    pub ens: [f64; 6],
}

const fn burn(p0: f64, p1: f64, rejection: [f64; 6], ens: [f64; 6]) -> BurnInRow {
    BurnInRow { p0, p1, rejection, ens }
}

const fn flat6(x: f64) -> [f64; 6] {
    [x; 6]
}

/// One half of Table 2.
#[derive(Debug, Clone, Copy)]
pub struct BurnInTable {
    pub n: usize,
    /// Total burn-in sizes `B` of the two burn-in column pairs.
    pub burn_in: [usize; 2],
    pub rows: [BurnInRow; 13],
}

/// Table 2. In the n = 50 half, the (0.2, 0.1) B = 12 pair reads 0.4% /
/// 60.8%, an order of magnitude apart; kept as printed.
pub const TABLE2: [BurnInTable; 2] = [
    BurnInTable {
        n: 50,
        burn_in: [12, 30],
        rows: [
            burn(0.1, 0.1, [0.3, 0.1, 51.7, 52.5, 19.0, 19.0], flat6(5.0)),
            burn(0.2, 0.2, [2.8, 0.4, 45.3, 44.3, 12.2, 12.1], flat6(10.0)),
            burn(0.3, 0.3, [6.1, 1.3, 25.5, 24.5, 8.7, 9.0], flat6(15.0)),
            burn(0.4, 0.4, [6.6, 3.0, 14.3, 14.3, 7.8, 7.7], flat6(20.0)),
            burn(0.5, 0.5, [7.1, 5.3, 11.1, 9.3, 6.9, 7.1], flat6(25.0)),
            burn(0.6, 0.6, [6.9, 7.5, 14.8, 6.7, 7.7, 6.6], flat6(30.0)),
            burn(0.7, 0.7, [6.1, 11.5, 25.8, 6.0, 8.9, 6.2], flat6(35.0)),
            burn(0.8, 0.8, [3.1, 9.1, 43.9, 5.7, 11.8, 5.4], flat6(40.0)),
            burn(0.9, 0.9, [0.3, 3.4, 51.7, 4.8, 19.4, 4.4], flat6(45.0)),
            burn(0.2, 0.1, [1.4, 0.5, 0.4, 60.8, 29.6, 28.5], [8.4, 8.4, 8.2, 8.2, 7.9, 7.9]),
            burn(0.2, 0.3, [6.9, 2.3, 40.4, 41.1, 19.0, 20.1], [12.8, 12.8, 12.8, 12.8, 12.7, 12.7]),
            burn(0.2, 0.5, [36.2, 25.1, 72.2, 71.3, 67.6, 67.6], [19.2, 20.7, 19.2, 19.8, 18.3, 18.9]),
            burn(0.2, 0.7, [81.5, 75.8, 98.0, 97.4, 97.5, 97.4], [23.8, 29.8, 24.2, 27.4, 23.2, 25.5]),
        ],
    },
    BurnInTable {
        n: 200,
        burn_in: [12, 120],
        rows: [
            burn(0.1, 0.1, [0.6, 0.4, 76.5, 76.8, 7.9, 8.2], flat6(20.0)),
            burn(0.2, 0.2, [3.7, 1.2, 44.8, 44.3, 5.9, 6.5], flat6(40.0)),
            burn(0.3, 0.3, [8.4, 2.3, 23.2, 24.2, 5.7, 5.0], flat6(60.0)),
            burn(0.4, 0.4, [7.0, 3.5, 12.9, 12.4, 5.3, 5.7], flat6(80.0)),
            burn(0.5, 0.5, [7.1, 5.0, 9.7, 7.6, 5.5, 5.4], flat6(100.0)),
            burn(0.6, 0.6, [7.2, 8.3, 13.6, 5.7, 5.7, 5.4], flat6(120.0)),
            burn(0.7, 0.7, [8.0, 15.1, 24.4, 5.1, 5.5, 5.3], flat6(140.0)),
            burn(0.8, 0.8, [3.7, 10.2, 44.2, 5.1, 6.1, 5.4], flat6(160.0)),
            burn(0.9, 0.9, [0.8, 6.2, 76.2, 5.1, 7.7, 5.3], flat6(180.0)),
            burn(0.2, 0.1, [6.8, 5.2, 80.5, 80.3, 54.7, 53.9], [33.9, 34.1, 33.6, 33.7, 31.5, 31.7]),
            burn(0.2, 0.3, [14.1, 10.3, 56.3, 56.7, 38.5, 39.8], [51.2, 51.9, 51.8, 51.9, 50.6, 51.0]),
            burn(0.2, 0.5, [49.6, 42.6, 99.5, 99.4, 99.5, 99.6], [78.1, 84.3, 78.4, 81.5, 73.3, 76.4]),
            burn(0.2, 0.7, [89.7, 87.1, 100.0, 100.0, 100.0, 100.0], [97.0, 121.9, 98.6, 112.7, 93.3, 102.7]),
        ],
    },
];

/// One design row of the trial redesigns (Table 5). `design` names the
/// rule and test as in [`TYPE1_DESIGNS`](crate::cli::sweep::TYPE1_DESIGNS).
#[derive(Debug, Clone, Copy)]
pub struct TrialRow {
    pub design: &'static str,
    pub type1: f64,
    pub power: f64,
    pub mean_prop: Option<f64>,
    pub var_prop: Option<f64>,
    pub ens: f64,
}

const fn row(design: &'static str, type1: f64, power: f64, alloc: Option<(f64, f64)>, ens: f64) -> TrialRow {
    let (mean_prop, var_prop) = match alloc {
        Some((m, v)) => (Some(m), Some(v)),
        None => (None, None),
    };
    TrialRow {
        design,
        type1,
        power,
        mean_prop,
        var_prop,
        ens,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrialTable {
    pub name: &'static str,
    pub n: usize,
    pub p0: f64,
    pub p1: f64,
    pub rows: [TrialRow; 6],
}

/// Table 5: an early-phase trial (NAC) and a confirmatory one (CALISTO),
/// both with two patients per arm burn-in.
pub const TRIALS: [TrialTable; 2] = [
    TrialTable {
        name: "nac",
        n: 68,
        p0: 0.635,
        p1: 0.893,
        rows: [
            row("CR-Z1", 5.5, 75.8, None, 51.9),
            row("CR-Z0", 4.7, 74.2, None, 51.9),
            row("N1-Z1", 65.7, 94.2, Some((0.2216, 0.1024)), 47.1),
            row("R1-Z1", 23.0, 76.6, Some((0.5798, 0.0207)), 53.4),
            row("N0-Z0", 4.6, 73.6, Some((0.6064, 0.0033)), 53.8),
            row("R0-Z0", 4.9, 73.4, Some((0.6909, 0.0076)), 55.3),
        ],
    },
    TrialTable {
        name: "calisto",
        n: 1502,
        p0: 0.941,
        p1: 0.991,
        rows: [
            row("CR-Z1", 5.0, 100.0, None, 1450.9),
            row("CR-Z0", 5.0, 100.0, None, 1450.9),
            row("N1-Z1", 96.3, 99.9, Some((0.1329, 0.1042)), 1423.4),
            row("R1-Z1", 5.4, 100.0, Some((0.5073, 0.0005)), 1451.5),
            row("N0-Z0", 5.2, 100.0, Some((0.7139, 0.0014)), 1467.0),
            row("R0-Z0", 5.1, 100.0, Some((0.8298, 0.0031)), 1475.7),
        ],
    },
];
