//! Admissibility report for the built-in kernels.

use nldiff::{check_admissibility, AdmissibilityConfig, AdmissibilityReport, Kernel};

fn main() -> nldiff::Result<()> {
    let kernels = [Kernel::gaussian(1.0)?, Kernel::hat(1.0)?, Kernel::box_kernel(1.0)?];
    let cfg = AdmissibilityConfig::default();
    let reports = kernels
        .iter()
        .map(|k| check_admissibility(k, &cfg))
        .collect::<nldiff::Result<Vec<_>>>()?;
    print!("{}", AdmissibilityReport::to_table(&reports).render());
    Ok(())
}
