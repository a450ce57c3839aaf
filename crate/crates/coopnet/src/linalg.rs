//! Dense symmetric positive-definite solves.
//!
//! The pair-system matrices this crate produces are SPD, so the solve of
//! choice is LAPACK's `dposv` (Cholesky). To avoid build-time BLAS plumbing,
//! the routine is looked up at runtime with `dlopen` from whatever OpenBLAS
//! or LAPACK the host provides; a pure-Rust Cholesky stands in when nothing
//! is loadable.

use std::ffi::CString;
use std::sync::OnceLock;

type DposvFn = unsafe extern "C" fn(
    uplo: *const u8,
    n: *const i32,
    nrhs: *const i32,
    a: *mut f64,
    lda: *const i32,
    b: *mut f64,
    ldb: *const i32,
    info: *mut i32,
);

static DPOSV: OnceLock<Option<DposvFn>> = OnceLock::new();

/// OpenBLAS selects its compute kernel from CPUID at load time. Virtualized
/// hosts often mask the model string, which drops OpenBLAS to a generic SSE3
/// kernel that is ~5x slower than the AVX paths the hardware supports, so
/// pick the kernel from the feature flags instead. Must run before the
/// library is first loaded; a user-provided setting wins.
fn force_openblas_core_type() {
    if std::env::var_os("OPENBLAS_CORETYPE").is_some() {
        return;
    }
    let Ok(cpuinfo) = std::fs::read_to_string("/proc/cpuinfo") else {
        return;
    };
    let Some(flags) = cpuinfo.lines().find(|l| l.starts_with("flags")) else {
        return;
    };
    let has = |f: &str| flags.split_whitespace().any(|x| x == f);
    let core = if has("avx512f") {
        "SKYLAKEX"
    } else if has("avx2") {
        "HASWELL"
    } else {
        return;
    };
    std::env::set_var("OPENBLAS_CORETYPE", core);
}

fn load_dposv() -> Option<DposvFn> {
    force_openblas_core_type();
    let candidates = [
        "libopenblas.so.0",
        "libopenblas.so",
        "liblapack.so.3",
        "liblapack.so",
    ];
    for name in candidates {
        let c_name = CString::new(name).expect("static name");
        let handle = unsafe { libc::dlopen(c_name.as_ptr(), libc::RTLD_NOW | libc::RTLD_GLOBAL) };
        if handle.is_null() {
            continue;
        }
        let sym = unsafe { libc::dlsym(handle, c"dposv_".as_ptr()) };
        if !sym.is_null() {
            return Some(unsafe { std::mem::transmute::<*mut libc::c_void, DposvFn>(sym) });
        }
    }
    None
}

/// Solves `A x = b` in place for SPD `A` (column-major `n x n`, both
/// triangles filled; `b` is overwritten with the solution). Fails if the
/// matrix is not positive definite.
pub fn solve_spd(a: &mut [f64], b: &mut [f64], n: usize) -> Result<(), String> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    if n == 0 {
        return Ok(());
    }
    if let Some(dposv) = DPOSV.get_or_init(load_dposv) {
        let ni = n as i32;
        let nrhs = 1i32;
        let mut info = 0i32;
        unsafe {
            dposv(
                b"L".as_ptr(),
                &ni,
                &nrhs,
                a.as_mut_ptr(),
                &ni,
                b.as_mut_ptr(),
                &ni,
                &mut info,
            );
        }
        if info != 0 {
            return Err(format!("dposv failed with info={info}"));
        }
        Ok(())
    } else {
        cholesky_solve(a, b, n)
    }
}

/// Unblocked lower Cholesky followed by two triangular solves. Roughly an
/// order of magnitude slower than a tuned BLAS at large `n`; used only when
/// no LAPACK is loadable.
fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> Result<(), String> {
    for j in 0..n {
        let mut diag = a[j + j * n];
        for k in 0..j {
            diag -= a[j + k * n] * a[j + k * n];
        }
        if diag <= 0.0 {
            return Err(format!("matrix not positive definite at column {j}"));
        }
        let diag = diag.sqrt();
        a[j + j * n] = diag;
        for i in (j + 1)..n {
            let mut v = a[i + j * n];
            for k in 0..j {
                v -= a[i + k * n] * a[j + k * n];
            }
            a[i + j * n] = v / diag;
        }
    }
    // Forward substitution L y = b, then back substitution L^T x = y.
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= a[i + k * n] * b[k];
        }
        b[i] = v / a[i + i * n];
    }
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in (i + 1)..n {
            v -= a[k + i * n] * b[k];
        }
        b[i] = v / a[i + i * n];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    #[test]
    fn solves_small_spd_system() {
        // A = [[4,1,0],[1,3,1],[0,1,2]], x = [1,2,3] -> b = A x.
        let a_ref = [4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let x_ref = [1.0, 2.0, 3.0];
        let mut b = [6.0, 10.0, 8.0];
        let mut a = a_ref;
        super::solve_spd(&mut a, &mut b, 3).unwrap();
        for (got, want) in b.iter().zip(x_ref.iter()) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn fallback_agrees_with_lapack_path() {
        let n = 24;
        // SPD by construction: diagonally dominant random-ish symmetric.
        let entry = |i: usize, j: usize| -> f64 {
            if i == j {
                n as f64 + 1.0 + (i as f64).sin().abs()
            } else {
                ((i * 31 + j * 17) % 7) as f64 / 7.0
            }
        };
        let mut a1 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a1[i + j * n] = entry(i.min(j), i.max(j));
            }
        }
        let mut a2 = a1.clone();
        let b0: Vec<f64> = (0..n).map(|i| (i as f64) - 3.0).collect();
        let mut b1 = b0.clone();
        let mut b2 = b0;
        super::solve_spd(&mut a1, &mut b1, n).unwrap();
        super::cholesky_solve(&mut a2, &mut b2, n).unwrap();
        for (x1, x2) in b1.iter().zip(b2.iter()) {
            assert!((x1 - x2).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_positive_definite() {
        let mut a = vec![1.0, 2.0, 2.0, 1.0]; // eigenvalues 3 and -1
        let mut b = vec![1.0, 1.0];
        assert!(super::solve_spd(&mut a, &mut b, 2).is_err());
    }
}
