/// One classical fourth-order Runge–Kutta step of an autonomous system.
#[inline]
pub(crate) fn rk4_step<const N: usize, F>(y: &[f64; N], h: f64, f: &mut F) -> [f64; N]
where
    F: FnMut(&[f64; N]) -> [f64; N],
{
    let axpy = |a: &[f64; N], s: f64, k: &[f64; N]| -> [f64; N] {
        let mut out = *a;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += s * ki;
        }
        out
    };
    let k1 = f(y);
    let k2 = f(&axpy(y, 0.5 * h, &k1));
    let k3 = f(&axpy(y, 0.5 * h, &k2));
    let k4 = f(&axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}
