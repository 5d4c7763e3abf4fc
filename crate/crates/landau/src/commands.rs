//! Table-producing commands. Each returns finished CSV text so output is
//! all-or-nothing.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use landau_core::kummeroracle;
use landau_core::variational::{self, asymptotic_eig};
use landau_core::{BoundaryCondition, FiberSpec};

use crate::error::{CliError, CliResult};
use crate::format::{csv, num};
use crate::method::{fem_eigenvalues, kummer_or_fem, Method, KUMMER_TOL};

/// `steps` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(CliError::Usage("--b-steps must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
        return Err(CliError::Usage("need 0 <= b-min <= b-max".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn fiber(m: i32, b: f64, bc: BoundaryCondition) -> CliResult<FiberSpec> {
    FiberSpec::new(m, b, bc).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchMethod {
    Fem,
    Kummer,
    Asymptotic,
    All,
}

impl BranchMethod {
    pub fn methods(self) -> Vec<Method> {
        match self {
            BranchMethod::Fem => vec![Method::Fem],
            BranchMethod::Kummer => vec![Method::Kummer],
            BranchMethod::Asymptotic => vec![Method::Asymptotic],
            BranchMethod::All => vec![Method::Asymptotic, Method::Fem, Method::Kummer],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchRow {
    pub m: i32,
    pub n: u32,
    pub b: f64,
    pub method: Method,
    pub lambda: f64,
}

impl BranchRow {
    fn key(&self) -> (i32, u32, u64, Method) {
        // b >= 0, so the bit pattern orders like the value.
        (self.m, self.n, self.b.to_bits(), self.method)
    }
}

pub struct BranchArgs {
    pub m: i32,
    pub n: u32,
    pub bc: BoundaryCondition,
    pub b_grid: Vec<f64>,
    pub method: BranchMethod,
}

pub fn branch_rows(pool: &rayon::ThreadPool, args: &BranchArgs) -> CliResult<Vec<BranchRow>> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let mut points = Vec::new();
    for &b in &args.b_grid {
        let spec = fiber(args.m, b, args.bc)?;
        for method in args.method.methods() {
            points.push((spec, method));
        }
    }
    let n = args.n;
    let mut rows = pool.install(|| {
        points
            .par_iter()
            .map(|(spec, method)| {
                let lambda = method.eigenvalue(spec, n)?;
                Ok(BranchRow {
                    m: spec.m,
                    n,
                    b: spec.b,
                    method: *method,
                    lambda,
                })
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    rows.sort_by_key(BranchRow::key);
    rows.dedup_by_key(|r| r.key());
    Ok(rows)
}

pub fn branch_csv(rows: &[BranchRow]) -> String {
    csv(
        "m,n,b,method,lambda",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{}",
                r.m,
                r.n,
                num(r.b),
                r.method,
                num(r.lambda)
            )
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub m: i32,
    pub n: u32,
}

pub struct SpectrumArgs {
    pub b: f64,
    pub bc: BoundaryCondition,
    pub m_max: u32,
    pub n_max: u32,
    pub lambda_max: f64,
    pub method: Method,
}

/// All branch values at one `b` for `|m| <= m_max`, `n <= n_max`, at most
/// `lambda_max`, ascending.
pub fn spectrum(pool: &rayon::ThreadPool, args: &SpectrumArgs) -> CliResult<Vec<SpectrumEntry>> {
    if args.n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    if !matches!(args.method, Method::Fem | Method::Kummer) {
        return Err(CliError::Usage(
            "spectrum supports --method fem or kummer".into(),
        ));
    }
    let m_max = args.m_max as i32;
    let specs = (-m_max..=m_max)
        .map(|m| fiber(m, args.b, args.bc))
        .collect::<CliResult<Vec<_>>>()?;
    let per_m = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| -> CliResult<Vec<SpectrumEntry>> {
                let values = match args.method {
                    Method::Fem => fem_eigenvalues(spec, args.n_max)?,
                    _ => (1..=args.n_max)
                        .map(|n| Method::Kummer.eigenvalue(spec, n))
                        .collect::<Result<Vec<_>, _>>()?,
                };
                Ok(values
                    .into_iter()
                    .zip(1..)
                    .map(|(lambda, n)| SpectrumEntry {
                        lambda,
                        m: spec.m,
                        n,
                    })
                    .collect())
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut entries: Vec<SpectrumEntry> = per_m
        .into_iter()
        .flatten()
        .filter(|e| e.lambda <= args.lambda_max)
        .collect();
    entries.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.m.cmp(&b.m))
            .then(a.n.cmp(&b.n))
    });
    Ok(entries)
}

pub fn spectrum_csv(entries: &[SpectrumEntry]) -> String {
    csv(
        "rank,lambda,m,n",
        entries
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{},{},{},{}", i + 1, num(e.lambda), e.m, e.n)),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketRow {
    pub m: i32,
    pub n: u32,
    pub b: f64,
    pub temple_lower: Option<f64>,
    pub fem: f64,
    pub kummer: Option<f64>,
    pub rayleigh_upper: Option<f64>,
    pub asymptotic: f64,
    pub preconditions_ok: bool,
}

pub fn bracket_row(
    m: i32,
    n: u32,
    b: f64,
    bc: BoundaryCondition,
    floor_c: f64,
) -> CliResult<BracketRow> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let spec = fiber(m, b, bc)?;
    let fem = Method::Fem.eigenvalue(&spec, n)?;
    let kummer = kummeroracle::fiber_eigenvalue(&spec, n, KUMMER_TOL).ok();
    let bracket = variational::bracket(&spec, n, floor_c).ok();
    let ok = bracket.is_some_and(|r| r.preconditions_ok);
    let row = BracketRow {
        m,
        n,
        b,
        temple_lower: bracket.filter(|r| r.preconditions_ok).map(|r| r.lower),
        fem,
        kummer,
        rayleigh_upper: bracket.map(|r| r.upper),
        asymptotic: asymptotic_eig(m, n, b, bc),
        preconditions_ok: ok,
    };
    if let (Some(lo), Some(up)) = (row.temple_lower, row.rayleigh_upper) {
        if !(lo <= fem && fem <= up) {
            return Err(CliError::Runtime(format!(
                "bracket ordering violated: temple {lo} fem {fem} rayleigh {up}"
            )));
        }
    }
    Ok(row)
}

pub fn bracket_csv(row: &BracketRow) -> String {
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    csv(
        "m,n,b,temple_lower,fem,kummer,rayleigh_upper,asymptotic,preconditions_ok",
        [format!(
            "{},{},{},{},{},{},{},{},{}",
            row.m,
            row.n,
            num(row.b),
            opt(row.temple_lower),
            num(row.fem),
            opt(row.kummer),
            opt(row.rayleigh_upper),
            num(row.asymptotic),
            row.preconditions_ok
        )],
    )
}

pub const FIGURE_M_MAX: i32 = 25;
pub const FIGURE_N_MAX: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub m: i32,
    pub n: u32,
    pub b: f64,
    pub lambda: f64,
}

/// Branches `0 <= m <= 25`, `1 <= n <= 3` over `b_grid`.
pub fn figure_rows(
    pool: &rayon::ThreadPool,
    bc: BoundaryCondition,
    b_grid: &[f64],
) -> CliResult<Vec<FigureRow>> {
    let mut points = Vec::new();
    for m in 0..=FIGURE_M_MAX {
        for &b in b_grid {
            points.push(fiber(m, b, bc)?);
        }
    }
    let mut rows: Vec<FigureRow> = pool
        .install(|| {
            points
                .par_iter()
                .map(|spec| -> CliResult<Vec<FigureRow>> {
                    (1..=FIGURE_N_MAX)
                        .map(|n| {
                            Ok(FigureRow {
                                m: spec.m,
                                n,
                                b: spec.b,
                                lambda: kummer_or_fem(spec, n)?,
                            })
                        })
                        .collect()
                })
                .collect::<CliResult<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by(|a, b| (a.m, a.n).cmp(&(b.m, b.n)).then(a.b.total_cmp(&b.b)));
    Ok(rows)
}

pub fn figure_csv(rows: &[FigureRow]) -> String {
    csv(
        "m,n,b,lambda",
        rows.iter()
            .map(|r| format!("{},{},{},{}", r.m, r.n, num(r.b), num(r.lambda))),
    )
}

pub fn reference_lines_csv(b_grid: &[f64]) -> String {
    csv(
        "b,n,lambda",
        b_grid.iter().flat_map(|&b| {
            (1..=FIGURE_N_MAX)
                .map(move |n| format!("{},{},{}", num(b), n, num((2 * n - 1) as f64 * b)))
        }),
    )
}

pub fn figure_file_name(bc: BoundaryCondition) -> CliResult<&'static str> {
    match bc {
        BoundaryCondition::Dirichlet => Ok("figure_dirichlet.csv"),
        BoundaryCondition::Neumann => Ok("figure_neumann.csv"),
        BoundaryCondition::Robin { .. } => Err(CliError::Usage(
            "figure supports --bc dirichlet or neumann".into(),
        )),
    }
}

/// Writes the figure and reference-line files; returns their paths.
pub fn write_figure(
    pool: &rayon::ThreadPool,
    bc: BoundaryCondition,
    b_grid: &[f64],
    out_dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    let name = figure_file_name(bc)?;
    let rows = figure_rows(pool, bc, b_grid)?;
    let io = |context: String| move |source| CliError::Io { context, source };
    fs::create_dir_all(out_dir).map_err(io(format!("cannot create {}", out_dir.display())))?;
    let fig = out_dir.join(name);
    let lines = out_dir.join("reference_lines.csv");
    fs::write(&fig, figure_csv(&rows)).map_err(io(format!("cannot write {}", fig.display())))?;
    fs::write(&lines, reference_lines_csv(b_grid))
        .map_err(io(format!("cannot write {}", lines.display())))?;
    Ok(vec![fig, lines])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(2)
            .build()
            .unwrap()
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(20.0, 30.0, 3).unwrap(), vec![20.0, 25.0, 30.0]);
        assert_eq!(linspace(5.0, 5.0, 1).unwrap(), vec![5.0]);
        assert!(linspace(3.0, 1.0, 2).is_err());
        assert!(linspace(1.0, 3.0, 0).is_err());
    }

    #[test]
    fn branch_all_gives_three_methods_per_b() {
        let args = BranchArgs {
            m: 0,
            n: 1,
            bc: BoundaryCondition::Neumann,
            b_grid: vec![20.0, 25.0, 30.0],
            method: BranchMethod::All,
        };
        let rows = branch_rows(&pool(), &args).unwrap();
        assert_eq!(rows.len(), 9);
        for r in &rows {
            assert!(r.lambda < r.b);
        }
        assert_eq!(rows[0].method, Method::Asymptotic);
        assert_eq!(rows[1].method, Method::Fem);
        assert_eq!(rows[2].method, Method::Kummer);
    }

    #[test]
    fn spectrum_empty_below_ground_state() {
        let args = SpectrumArgs {
            b: 20.0,
            bc: BoundaryCondition::Neumann,
            m_max: 3,
            n_max: 2,
            lambda_max: 1.0,
            method: Method::Fem,
        };
        assert!(spectrum(&pool(), &args).unwrap().is_empty());
    }

    #[test]
    fn bracket_small_b_flags_preconditions() {
        let row = bracket_row(2, 1, 5.0, BoundaryCondition::Dirichlet, 2.0).unwrap();
        assert!(!row.preconditions_ok);
        assert!(row.temple_lower.is_none());
        assert!(bracket_csv(&row).lines().nth(1).unwrap().split(',').nth(3) == Some(""));
    }

    #[test]
    fn reference_lines_are_odd_multiples() {
        let text = reference_lines_csv(&[10.0]);
        assert_eq!(
            text,
            "b,n,lambda\n10.0000000000000,1,10.0000000000000\n10.0000000000000,2,30.0000000000000\n10.0000000000000,3,50.0000000000000\n"
        );
    }
}
