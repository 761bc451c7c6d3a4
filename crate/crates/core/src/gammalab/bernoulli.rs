use std::sync::OnceLock;

use rug::Rational;

use crate::numcore::binomial;

/// Number of even-index Bernoulli numbers kept (`B_0, B_2, …, B_{2(TABLE-1)}`).
pub(crate) const TABLE: usize = 320;

static EVEN: OnceLock<Vec<Rational>> = OnceLock::new();

fn table() -> &'static [Rational] {
    EVEN.get_or_init(|| {
        // Σ_{j≤k} C(2k+1, 2j) B_{2j} = (2k+1)/2
        let mut b: Vec<Rational> = Vec::with_capacity(TABLE);
        b.push(Rational::from(1));
        for k in 1..TABLE as u32 {
            let m = 2 * k + 1;
            let mut acc = Rational::from((m, 2));
            for (j, bj) in b.iter().enumerate() {
                acc -= Rational::from(binomial(m, 2 * j as u32)) * bj;
            }
            b.push(acc / m);
        }
        b
    })
}

/// `B_{2k}`, or `None` past the precomputed table.
pub fn bernoulli_even(k: usize) -> Option<&'static Rational> {
    table().get(k)
}
