//! The supporting identity suite: power/commutation equalities, nilpotency
//! closure, and the two nilpotent residuals behind the sum formula.
//!
//! Each check becomes one [`VerificationReport`]; nilpotency claims are
//! reported as `X^n = 0` so the `holds ⇔ lhs = rhs` contract stays uniform.
//! Identity ids are stable and listed in emission order in the CLI docs.

use num_bigint::BigInt;

use crate::drazin::{drazin, DrazinResult};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::Result;

use super::{build_xi, require_conditions, ConditionPair, VerificationReport, XiContext};

/// Runs every supporting identity on the pair.
///
/// Indexed identities are checked for `i = 1..=max_power`; `max_power` is
/// raised to the matrix dimension if below it, so nilpotency-degree cases
/// are always covered.
pub fn lemma_suite(pair: &ConditionPair, max_power: usize) -> Result<Vec<VerificationReport>> {
    require_conditions(pair)?;
    let n = pair.a().rows();
    let depth = max_power.max(n);

    let a = pair.a().clone();
    let b = pair.b().clone();
    let field = a.field();
    let zero = Matrix::zero(n, n, field);
    let a_dz: DrazinResult = drazin(&a)?;
    let b_dz: DrazinResult = drazin(&b)?;
    let ad = &a_dz.dinv;
    let bd = &b_dz.dinv;
    let api = &a_dz.spectral_idempotent;
    let bpi = &b_dz.spectral_idempotent;
    let ctx: XiContext = build_xi(pair)?;
    let xi = &ctx.xi;
    let xid = &ctx.xi_drazin.dinv;
    let xipi = &ctx.xi_drazin.spectral_idempotent;

    let mut reports = Vec::new();
    let mut push = |id: String, notes: &str, eqs: &[(Matrix, Matrix)]| {
        reports.push(VerificationReport::from_equalities(&id, pair, notes, eqs));
    };

    // powers of a slide across b: a^{i+1}b = a^i b a = a b a^i, a^{2i}b = a^i b a^i
    for i in 1..=depth {
        let ai = a.pow(i)?;
        let lhs = a.pow(i + 1)?.mul(&b)?;
        push(
            format!("power_commutation[{i}]"),
            "",
            &[
                (lhs.clone(), ai.mul(&b)?.mul(&a)?),
                (lhs, a.mul(&b)?.mul(&ai)?),
                (a.pow(2 * i)?.mul(&b)?, ai.mul(&b)?.mul(&ai)?),
            ],
        );
    }

    // (ab)^i = a^i b^i
    for i in 1..=depth {
        push(
            format!("product_power_split[{i}]"),
            "",
            &[(a.mul(&b)?.pow(i)?, a.pow(i)?.mul(&b.pow(i)?)?)],
        );
    }

    // one nilpotent factor makes both products nilpotent
    let a_nil = a.is_nilpotent()?;
    let b_nil = b.is_nilpotent()?;
    if a_nil || b_nil {
        push(
            "nilpotent_product_closure".into(),
            "",
            &[
                (a.mul(&b)?.pow(n)?, zero.clone()),
                (b.mul(&a)?.pow(n)?, zero.clone()),
            ],
        );
    } else {
        push(
            "nilpotent_product_closure".into(),
            "neither member is nilpotent; holds vacuously",
            &[(zero.clone(), zero.clone())],
        );
    }

    // two nilpotent members make the sum nilpotent
    if a_nil && b_nil {
        push(
            "nilpotent_sum_closure".into(),
            "",
            &[(a.add(&b)?.pow(n)?, zero.clone())],
        );
    } else {
        push(
            "nilpotent_sum_closure".into(),
            "members are not both nilpotent; holds vacuously",
            &[(zero.clone(), zero.clone())],
        );
    }

    // (a+b)^k = sum_{i=0}^{k-1} C(k-1,i) (a^{k-i} b^i + b^{k-i} a^i)
    for k in 1..=depth {
        let mut rhs = zero.clone();
        let coeffs = pascal_row(k - 1);
        for (i, c) in coeffs.iter().enumerate() {
            let term = a
                .pow(k - i)?
                .mul(&b.pow(i)?)?
                .add(&b.pow(k - i)?.mul(&a.pow(i)?)?)?;
            rhs = rhs.add(&term.scale(&Scalar::from_bigint(field, c))?)?;
        }
        push(
            format!("sum_power_expansion[{k}]"),
            "",
            &[(a.add(&b)?.pow(k)?, rhs)],
        );
    }

    // (a^D)^2 b = a^D b a^D and b^2 a^D = b a^D b
    push(
        "dinv_power_commutation".into(),
        "",
        &[
            (ad.pow(2)?.mul(&b)?, ad.mul(&b)?.mul(ad)?),
            (b.pow(2)?.mul(ad)?, b.mul(ad)?.mul(&b)?),
        ],
    );

    // {ab, a^D b, a b^D, a^D b^D} all commute with a, and symmetrically for b
    let with_a = [a.mul(&b)?, ad.mul(&b)?, a.mul(bd)?, ad.mul(bd)?];
    push(
        "commutant_membership_a".into(),
        "",
        &with_a
            .iter()
            .map(|x| Ok((x.mul(&a)?, a.mul(x)?)))
            .collect::<Result<Vec<_>>>()?,
    );
    let with_b = [b.mul(&a)?, bd.mul(&a)?, b.mul(ad)?, bd.mul(ad)?];
    push(
        "commutant_membership_b".into(),
        "",
        &with_b
            .iter()
            .map(|x| Ok((x.mul(&b)?, b.mul(x)?)))
            .collect::<Result<Vec<_>>>()?,
    );

    // {a, a^D, ab, a^D b, a b^D, a^D b^D} all commute with xi = 1 + a^D b
    let with_xi = [
        a.clone(),
        ad.clone(),
        a.mul(&b)?,
        ad.mul(&b)?,
        a.mul(bd)?,
        ad.mul(bd)?,
    ];
    push(
        "xi_commutant_membership".into(),
        "",
        &with_xi
            .iter()
            .map(|x| Ok((x.mul(xi)?, xi.mul(x)?)))
            .collect::<Result<Vec<_>>>()?,
    );

    // mixed-power swaps
    let abd = a.mul(bd)?;
    let adb = ad.mul(&b)?;
    let bad = b.mul(ad)?;
    let bda = bd.mul(&a)?;
    push(
        "square_swap_a_bd".into(),
        "",
        &[
            (abd.mul(bd)?.mul(&a)?, abd.pow(2)?),
            (abd.pow(2)?, a.pow(2)?.mul(&bd.pow(2)?)?),
        ],
    );
    push(
        "square_swap_b_ad".into(),
        "",
        &[
            (bad.mul(ad)?.mul(&b)?, bad.pow(2)?),
            (bad.pow(2)?, b.pow(2)?.mul(&ad.pow(2)?)?),
        ],
    );
    for i in 1..=depth {
        push(
            format!("power_swap_a_bd[{i}]"),
            "",
            &[
                (abd.pow(i + 1)?, abd.mul(&bda.pow(i)?)?),
                (abd.pow(i + 1)?, a.pow(i + 1)?.mul(&bd.pow(i + 1)?)?),
            ],
        );
        push(
            format!("power_swap_ad_b[{i}]"),
            "",
            &[
                (adb.pow(i + 1)?, adb.mul(&bad.pow(i)?)?),
                (adb.pow(i + 1)?, ad.pow(i + 1)?.mul(&b.pow(i + 1)?)?),
            ],
        );
        push(
            format!("power_swap_b_ad[{i}]"),
            "",
            &[
                (bad.pow(i + 1)?, bad.mul(&adb.pow(i)?)?),
                (bad.pow(i + 1)?, b.pow(i + 1)?.mul(&ad.pow(i + 1)?)?),
            ],
        );
        push(
            format!("power_swap_bd_a[{i}]"),
            "",
            &[
                (bda.pow(i + 1)?, bda.mul(&abd.pow(i)?)?),
                (bda.pow(i + 1)?, bd.pow(i + 1)?.mul(&a.pow(i + 1)?)?),
            ],
        );
    }

    // b^pi a^pi b - b b^D a a^pi is nilpotent
    let proj_diff = bpi.mul(api)?.mul(&b)?.sub(&b.mul(bd)?.mul(&a)?.mul(api)?)?;
    push(
        "projected_difference_nilpotent".into(),
        "nilpotency reported as the n-th power vanishing",
        &[(proj_diff.pow(n)?, zero.clone())],
    );

    // a xi xi^pi + xi^D a a^pi + (b^pi a^pi b - b b^D a a^pi) is nilpotent
    let residual = a
        .mul(xi)?
        .mul(xipi)?
        .add(&xid.mul(&a)?.mul(api)?)?
        .add(&proj_diff)?;
    push(
        "residual_sum_nilpotent".into(),
        "nilpotency reported as the n-th power vanishing",
        &[(residual.pow(n)?, zero)],
    );

    Ok(reports)
}

/// Row `n` of Pascal's triangle: `C(n, 0) ..= C(n, n)`, exact.
fn pascal_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::from(1));
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::from(1));
        row = next;
    }
    row
}
