// What-if price explorer: one record form, a predicted-price card, and a
// miles/month sweep chart. All prices on screen come from the scoring
// service's Scored Labels fields; the UI holds the bearer token in memory
// only and keeps at most one scoring request in flight.

import {
  BadRequestError,
  NetworkError,
  ScoringClient,
  UnauthorizedError,
  type ScoredRecord,
} from "./api";
import { renderSweepChart, type SweepPoint } from "./chart";
import { renderUsd } from "./money";
import {
  buildQueryRecord,
  buildSweepRecords,
  sweepAxisValue,
  type SweepAxis,
  type SweepSpec,
  type WhatIfQuery,
} from "./sweep";

const FIELD_NAMES = ["Model", "Year", "Battery", "Miles", "Date"] as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  for (const child of children) node.append(child);
  return node;
}

function labeled(text: string, input: HTMLElement): HTMLElement {
  return el("label", { class: "field" }, [text, input]);
}

export class App {
  private inflight: AbortController | null = null;
  private lastAction: (() => void) | null = null;

  readonly root: HTMLElement;
  private readonly inputs = new Map<string, HTMLInputElement>();
  private serviceUrl!: HTMLInputElement;
  private token!: HTMLInputElement;
  private axis!: HTMLSelectElement;
  private sweepStart!: HTMLInputElement;
  private sweepEnd!: HTMLInputElement;
  private sweepStep!: HTMLInputElement;
  private priceCard!: HTMLElement;
  private chartHost!: HTMLElement;
  private banner!: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.build();
  }

  private build() {
    const settings = el("fieldset", { class: "settings" }, [
      el("legend", {}, ["service"]),
    ]);
    this.serviceUrl = el("input", { id: "service-url", value: "http://127.0.0.1:8080" });
    this.token = el("input", { id: "token", type: "password", placeholder: "bearer token" });
    settings.append(labeled("service URL", this.serviceUrl), labeled("token", this.token));

    const form = el("fieldset", { class: "query" }, [el("legend", {}, ["vehicle"])]);
    const defaults: Record<string, string> = {
      Model: "Model X",
      Year: "2017",
      Battery: "75D",
      Miles: "19000",
      Date: "2019-01-01",
    };
    for (const name of FIELD_NAMES) {
      const input = el("input", { id: `field-${name}`, value: defaults[name] });
      this.inputs.set(name, input);
      form.append(labeled(name, input));
    }

    const predict = el("button", { id: "predict" }, ["predict price"]);
    predict.addEventListener("click", () => this.predictOne());

    const sweepBox = el("fieldset", { class: "sweep" }, [el("legend", {}, ["sweep"])]);
    this.axis = el("select", { id: "sweep-axis" }, [
      el("option", { value: "Miles" }, ["Miles"]),
      el("option", { value: "Date" }, ["Date (months ahead)"]),
    ]);
    this.sweepStart = el("input", { id: "sweep-start", value: "0" });
    this.sweepEnd = el("input", { id: "sweep-end", value: "60000" });
    this.sweepStep = el("input", { id: "sweep-step", value: "5000" });
    const runSweep = el("button", { id: "run-sweep" }, ["run sweep"]);
    runSweep.addEventListener("click", () => this.runSweep());
    sweepBox.append(
      labeled("axis", this.axis),
      labeled("start", this.sweepStart),
      labeled("end", this.sweepEnd),
      labeled("step", this.sweepStep),
      runSweep,
    );

    this.banner = el("div", { id: "banner", class: "banner hidden" });
    this.priceCard = el("div", { id: "price-card", class: "price-card hidden" });
    this.chartHost = el("div", { id: "chart-host" });

    this.root.append(settings, form, predict, sweepBox, this.banner, this.priceCard, this.chartHost);
  }

  private client(): ScoringClient {
    return new ScoringClient(this.serviceUrl.value, this.token.value);
  }

  private query(): WhatIfQuery {
    const get = (name: string) => this.inputs.get(name)!.value.trim();
    return {
      model: get("Model"),
      year: get("Year"),
      battery: get("Battery"),
      miles: get("Miles"),
      date: get("Date") || undefined,
    };
  }

  private clearFeedback() {
    this.banner.className = "banner hidden";
    this.banner.textContent = "";
    this.banner.querySelectorAll("button").forEach((b) => b.remove());
    for (const input of this.inputs.values()) input.classList.remove("field-error");
    this.token.classList.remove("field-error");
  }

  /** Stale queries die here: one scoring request in flight per view. */
  private freshSignal(): AbortSignal {
    this.inflight?.abort();
    this.inflight = new AbortController();
    return this.inflight.signal;
  }

  private showBanner(kind: "error" | "retry" | "auth", text: string) {
    this.banner.className = `banner ${kind}`;
    this.banner.textContent = text;
    if (kind === "retry" && this.lastAction) {
      const again = el("button", { id: "retry" }, ["retry"]);
      const action = this.lastAction;
      again.addEventListener("click", () => action());
      this.banner.append(" ", again);
    }
  }

  private handleFailure(err: unknown) {
    // a newer query cancelled this one: stay quiet, its result is coming
    if (err instanceof DOMException && err.name === "AbortError") return;
    this.priceCard.className = "price-card hidden";
    this.priceCard.textContent = "";
    this.chartHost.replaceChildren();
    if (err instanceof UnauthorizedError) {
      this.token.classList.add("field-error");
      this.showBanner("auth", "unauthorized: paste a valid bearer token in settings");
      return;
    }
    if (err instanceof BadRequestError) {
      const mentioned = FIELD_NAMES.find((name) => err.detail.includes(name));
      if (mentioned) this.inputs.get(mentioned)!.classList.add("field-error");
      this.showBanner("error", `request rejected: ${err.detail}`);
      return;
    }
    if (err instanceof NetworkError) {
      this.showBanner("retry", err.message);
      return;
    }
    this.showBanner("error", err instanceof Error ? err.message : String(err));
  }

  private showPriceCard(record: ScoredRecord) {
    const label = record["Scored Labels"];
    this.priceCard.className = "price-card";
    this.priceCard.dataset.label = label;
    this.priceCard.replaceChildren(
      el("strong", { class: "price", "data-label": label }, [renderUsd(label)]),
      el("span", { class: "caption" }, [`${record.Model}, ${record.Year}, ${record.Battery}, ${record.Miles} miles`]),
    );
  }

  async predictOne(): Promise<void> {
    this.clearFeedback();
    const action = () => void this.predictOne();
    this.lastAction = action;
    const signal = this.freshSignal();
    try {
      const [scored] = await this.client().score([buildQueryRecord(this.query())], signal);
      this.chartHost.replaceChildren();
      this.showPriceCard(scored);
    } catch (err) {
      this.handleFailure(err);
    }
  }

  async runSweep(): Promise<void> {
    this.clearFeedback();
    const action = () => void this.runSweep();
    this.lastAction = action;
    const query = this.query();
    const spec: SweepSpec = {
      axis: this.axis.value as SweepAxis,
      start: Number(this.sweepStart.value),
      end: Number(this.sweepEnd.value),
      step: Number(this.sweepStep.value),
    };
    let records;
    try {
      records = buildSweepRecords(query, spec);
    } catch (err) {
      this.showBanner("error", err instanceof Error ? err.message : String(err));
      return;
    }
    const signal = this.freshSignal();
    try {
      const scored = await this.client().score(records, signal);
      if (scored.length === 1) {
        this.chartHost.replaceChildren();
        this.showPriceCard(scored[0]);
        return;
      }
      const points: SweepPoint[] = scored.map((record) => ({
        x: sweepAxisValue(spec.axis, record, query),
        record,
      }));
      this.priceCard.className = "price-card hidden";
      this.chartHost.replaceChildren(renderSweepChart(points, spec.axis));
    } catch (err) {
      this.handleFailure(err);
    }
  }
}

export function mount(root: HTMLElement): App {
  return new App(root);
}
