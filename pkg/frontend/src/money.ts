// Rendering helpers. Prices shown anywhere in the UI come straight from a
// "Scored Labels" response field; nothing here predicts anything.

const USD = new Intl.NumberFormat("en-US", {
  style: "currency",
  currency: "USD",
  maximumFractionDigits: 2,
});

export function renderUsd(scoredLabel: string): string {
  const value = Number(scoredLabel);
  if (!Number.isFinite(value)) {
    throw new Error(`Scored Labels ${JSON.stringify(scoredLabel)} is not a number`);
  }
  return USD.format(value);
}
