//! Small summation and moment helpers shared by the estimators.

/// Mean and sample standard deviation (n - 1 denominator; zero for n < 2).
///
/// Shifted by the first value, so a constant series yields exactly zero spread.
pub fn mean_std(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.into_iter().collect();
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let shift = values[0];
    let (s1, s2) = values.iter().fold((0.0, 0.0), |(a, b), v| {
        let dv = v - shift;
        (a + dv, b + dv * dv)
    });
    let nf = n as f64;
    let mean = shift + s1 / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = ((s2 - s1 * s1 / nf) / (nf - 1.0)).max(0.0);
    (mean, var.sqrt())
}

/// Neumaier-compensated sum, evaluated in iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
