use super::chain::proximity_counts;
use super::site_set::SiteSet1D;
use super::Lattice1dError;

/// The scaling function `h(n) = ln n / ln ln n`, natural logarithms.
pub fn h(n: f64) -> Result<f64, Lattice1dError> {
    if n.is_nan() || n <= std::f64::consts::E {
        return Err(Lattice1dError::HOutOfDomain(n));
    }
    let ln = n.ln();
    Ok(ln / ln.ln())
}

/// Membership in the family G: at most `10K` gaps and `L(a) <= (K-1)|a|`.
pub fn in_family_g(a: &SiteSet1D, k: u32) -> bool {
    a.gap_count() as u64 <= 10 * k as u64
        && a.total_gap_sites() <= (k as i64 - 1) * a.len() as i64
}

/// Membership in the family S_M: `L(a) <= h(|a|)/M`, `|C(a)| <= 3` and
/// `|C2(a)| <= 1`.
pub fn in_family_s(a: &SiteSet1D, m: u32) -> Result<bool, Lattice1dError> {
    let hn = h(a.len() as f64)?;
    if (a.total_gap_sites() as f64) > hn / m as f64 {
        return Ok(false);
    }
    let (c, c2) = proximity_counts(&a.gap_sites());
    Ok(c <= 3 && c2 <= 1)
}
