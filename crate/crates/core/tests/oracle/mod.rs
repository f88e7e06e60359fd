//! Straight floating-point transcription of the block encoder and decoder,
//! kept deliberately naive so it can be checked against the library.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encoded {
    pub s: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub a: f64,
    pub raw_lh: f64,
    pub raw_hl: f64,
    /// 0 for even, 1 for odd.
    pub b: u8,
    pub c: u8,
    pub lh: f64,
    pub hl: f64,
}

fn is_odd(v: f64) -> bool {
    v.rem_euclid(2.0) == 1.0
}

fn round_away(v: f64) -> f64 {
    // f64::round already rounds halves away from zero.
    v.round()
}

pub fn encode(x: [[f64; 2]; 2], lambda: f64) -> Encoded {
    let [[x11, x12], [x21, x22]] = x;
    let s = round_away((x11 + x12 + x21 + x22) / 4.0);
    let n1 = x11 - x22;
    let n2 = x12 - x21;
    let n3 = n1.abs() - n2.abs();
    let (major, minor) = if n1.abs() >= n2.abs() {
        (n1, n2)
    } else {
        (n2, n1)
    };
    let magnitude = n1.abs() + n2.abs() + n3.abs();
    let a = if major < 0.0 { -magnitude } else { magnitude };

    let (raw_lh, raw_hl) = if a >= 0.0 {
        ((s + lambda * a).ceil(), (s - lambda * a).floor())
    } else {
        ((s + lambda * a).floor(), (s - lambda * a).ceil())
    };
    let b = u8::from(minor < 0.0);
    let c = u8::from(x11 + x21 < x12 + x22);
    let fix = |v: f64, want: u8| {
        if u8::from(is_odd(v)) == want {
            v
        } else {
            v - 1.0
        }
    };
    Encoded {
        s,
        n1,
        n2,
        n3,
        a,
        raw_lh,
        raw_hl,
        b,
        c,
        lh: fix(raw_lh, c),
        hl: fix(raw_hl, b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decoded {
    pub a_hat: [[f64; 2]; 2],
    pub a_hat_t: [[f64; 2]; 2],
    pub b_hat: [[f64; 2]; 2],
    pub m_hat: [[f64; 2]; 2],
}

/// `mu_percent` is μ·100, so that half-way estimates stay exact in f64.
pub fn decode(lh: f64, hl: f64, mu_percent: f64) -> Decoded {
    let d = (lh - hl).abs();
    let plus = (50.0 * (lh + hl) + mu_percent * d) / 100.0;
    let minus = (50.0 * (lh + hl) - mu_percent * d) / 100.0;
    let (x11, x22) = if lh >= hl {
        (plus, minus)
    } else {
        (minus, plus)
    };

    let hl_odd = is_odd(hl);
    let (x12, x21) = if (hl >= lh && hl_odd) || (hl < lh && !hl_odd) {
        (lh, hl)
    } else {
        (hl, lh)
    };
    let a_hat = [[x11, x12], [x21, x22]];
    let a_hat_t = [[x12, x11], [x22, x21]];

    let n1 = x11 + x21;
    let n2 = x22 + x12;
    let lh_odd = is_odd(lh);
    let b_hat = if (n1 < n2 && lh_odd) || (n1 >= n2 && !lh_odd) {
        a_hat
    } else {
        a_hat_t
    };
    Decoded {
        a_hat,
        a_hat_t,
        b_hat,
        m_hat: b_hat.map(|r| r.map(round_away)),
    }
}

/// Integer-valued 2×2 view of an image block at block coordinates.
pub fn block_at(rows: &[[u8; 4]; 4], bi: usize, bj: usize) -> [[f64; 2]; 2] {
    let v = |r: usize, c: usize| f64::from(rows[2 * bi + r][2 * bj + c]);
    [[v(0, 0), v(0, 1)], [v(1, 0), v(1, 1)]]
}
