/**
 * In-trust loss: cross entropy plus a noise-robust reversed term.
 *
 *     L = alpha * CE(q, p) + beta * DCE(q, p)
 *     CE  = -sum_i q_i log p_i
 *     DCE = -sum_i p_i log(delta * p_i + (1 - delta) * q_i)
 *
 * p is the model distribution, q the (possibly noisy) label distribution.
 * Log arguments are clamped at 1e-12 so boundary distributions stay finite.
 * Must agree with the reference implementation served by the attack side;
 * the fixture under fixtures/intrust_cases.json pins that agreement.
 */

export const CLAMP = 1e-12;
const SUM_TOL = 1e-3;

function checkDistributions(p: readonly number[], q: readonly number[]): void {
  if (p.length !== q.length || p.length === 0) {
    throw new RangeError("p and q must be non-empty arrays of equal length");
  }
  for (const arr of [p, q]) {
    for (const x of arr) {
      if (!Number.isFinite(x)) throw new RangeError("p and q must be finite");
      if (x < 0) throw new RangeError("p and q must be non-negative");
    }
  }
  // loose sum check: gradient checks nudge single coordinates
  for (const [name, arr] of [
    ["p", p],
    ["q", q],
  ] as const) {
    const total = arr.reduce((a, b) => a + b, 0);
    if (Math.abs(total - 1.0) > SUM_TOL) {
      throw new RangeError(`${name} must sum to 1 (got ${total.toFixed(6)})`);
    }
  }
}

function checkDelta(delta: number): void {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw new RangeError("delta must be in [0, 1]");
  }
}

export function inTrustLoss(
  p: readonly number[],
  q: readonly number[],
  alpha = 1.0,
  beta = 1.0,
  delta = 0.5,
): number {
  checkDistributions(p, q);
  checkDelta(delta);
  let ce = 0.0;
  let dce = 0.0;
  for (let i = 0; i < p.length; i++) {
    const pi = p[i]!;
    const qi = q[i]!;
    ce -= qi * Math.log(Math.max(pi, CLAMP));
    const mix = delta * pi + (1.0 - delta) * qi;
    dce -= pi * Math.log(Math.max(mix, CLAMP));
  }
  return alpha * ce + beta * dce;
}

/** Analytic dL/dp, matching the clamped forward computation. */
export function inTrustGradP(
  p: readonly number[],
  q: readonly number[],
  alpha = 1.0,
  beta = 1.0,
  delta = 0.5,
): number[] {
  checkDistributions(p, q);
  checkDelta(delta);
  const grad = new Array<number>(p.length);
  for (let i = 0; i < p.length; i++) {
    const pi = p[i]!;
    const qi = q[i]!;
    const pSafe = Math.max(pi, CLAMP);
    const mix = Math.max(delta * pi + (1.0 - delta) * qi, CLAMP);
    const gradCe = -qi / pSafe;
    const gradDce = -(Math.log(mix) + (pi * delta) / mix);
    grad[i] = alpha * gradCe + beta * gradDce;
  }
  return grad;
}
