/** Respondent-facing survey flow.
 *
 * All state of record lives on the server: the app only ever renders the
 * payload of GET /sessions/{id}/next and posts answers back. Rendering is
 * plain DOM, side-by-side monospaced panes with synchronized scrolling,
 * and every task shows a "task k of n" progress line. A submission guard
 * prevents double posts; a rejected submission surfaces the server's
 * message without discarding what the respondent already entered.
 */

import { SurveyApi, TaskPayload, ResponseBody, TaskKind } from "./api.js";
import {
  TieGroups,
  competitionRanking,
  rankNext,
  rankedLabels,
  tieWithPrevious,
} from "./ranking.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function codePane(source: string, testId: string): HTMLElement {
  const pane = el("pre", "code-pane");
  pane.dataset.testid = testId;
  pane.textContent = source;
  return pane;
}

function syncScroll(panes: HTMLElement[]): void {
  for (const pane of panes) {
    pane.addEventListener("scroll", () => {
      for (const other of panes) {
        if (other !== pane) {
          other.scrollTop = pane.scrollTop;
          other.scrollLeft = pane.scrollLeft;
        }
      }
    });
  }
}

export class SurveyApp {
  private submitting = false;
  private groups: TieGroups = [];
  private chosen: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SurveyApi,
    readonly sessionId: string,
  ) {}

  async start(): Promise<void> {
    await this.loadNext();
  }

  private async loadNext(): Promise<void> {
    const task = await this.api.nextTask(this.sessionId);
    this.groups = [];
    this.chosen = null;
    this.render(task);
  }

  private render(task: TaskPayload): void {
    this.root.replaceChildren();
    if (task.done) {
      const done = el("div", "done-screen");
      done.dataset.testid = "done";
      done.append(
        el("h2", undefined, "All tasks completed"),
        el("p", undefined, "Thank you. You can close this window."),
      );
      this.root.append(done);
      return;
    }

    const header = el("div", "task-header");
    const progress = el("span", "progress",
      `Task ${(task.taskIndex ?? 0) + 1} of ${task.taskCount ?? 1}`);
    progress.dataset.testid = "progress";
    header.append(progress);
    this.root.append(header);

    if (task.kind === "CASE_RANKING") {
      this.renderRanking(task);
    } else if (task.kind === "PAIR_PREFERENCE") {
      this.renderPair(task);
    } else {
      this.renderThinkAloud(task);
    }

    const error = el("div", "error-line");
    error.dataset.testid = "error";
    error.hidden = true;
    this.root.append(error);
  }

  // -- ranking -------------------------------------------------------------

  private renderRanking(task: TaskPayload): void {
    const items = task.items ?? [];
    this.root.append(
      el("p", "instructions",
        "Rank the codes from most similar to the original (rank 1) to " +
        "least similar. Codes that look equally similar can share a rank."),
    );

    const originalBox = el("section", "original-box");
    originalBox.append(el("h3", undefined, "Original"));
    originalBox.append(codePane(task.original ?? "", "original"));
    this.root.append(originalBox);

    const grid = el("div", "variant-grid");
    const panes: HTMLElement[] = [];
    for (const item of items) {
      const card = el("div", "variant-card");
      card.dataset.testid = `card-${item.label}`;
      card.dataset.label = item.label;

      const title = el("div", "variant-title");
      const rankBadge = el("span", "rank-badge");
      rankBadge.dataset.testid = `rank-${item.label}`;
      title.append(el("span", undefined, item.label), rankBadge);
      card.append(title);

      const pane = codePane(item.source, `source-${item.label}`);
      panes.push(pane);
      card.append(pane);

      const buttons = el("div", "variant-buttons");
      const next = el("button", undefined, "Rank next");
      next.dataset.testid = `rank-next-${item.label}`;
      next.addEventListener("click", () => {
        this.groups = rankNext(this.groups, item.label);
        refresh();
      });
      const tie = el("button", undefined, "Tie with previous");
      tie.dataset.testid = `tie-${item.label}`;
      tie.addEventListener("click", () => {
        this.groups = tieWithPrevious(this.groups, item.label);
        refresh();
      });
      buttons.append(next, tie);
      card.append(buttons);
      grid.append(card);
    }
    this.root.append(grid);
    syncScroll(panes);

    const controls = el("div", "controls");
    const reset = el("button", undefined, "Reset ranking");
    reset.dataset.testid = "reset";
    reset.addEventListener("click", () => {
      this.groups = [];
      refresh();
    });
    const submit = el("button", "primary", "Submit ranking");
    submit.dataset.testid = "submit";
    submit.addEventListener("click", () => {
      void this.submit(task, { ranks: competitionRanking(this.groups) });
    });
    controls.append(reset, submit);
    this.root.append(controls);

    const refresh = () => {
      const ranks = competitionRanking(this.groups);
      const ranked = rankedLabels(this.groups);
      for (const item of items) {
        const badge = this.root.querySelector<HTMLElement>(
          `[data-testid="rank-${item.label}"]`);
        const card = this.root.querySelector<HTMLElement>(
          `[data-testid="card-${item.label}"]`);
        const rank = ranks[item.label];
        if (badge && card) {
          badge.textContent = rank === undefined ? "" : `rank ${rank}`;
          if (rank === undefined) {
            delete card.dataset.rank;
          } else {
            card.dataset.rank = String(rank);
          }
        }
        const next = this.root.querySelector<HTMLButtonElement>(
          `[data-testid="rank-next-${item.label}"]`);
        const tie = this.root.querySelector<HTMLButtonElement>(
          `[data-testid="tie-${item.label}"]`);
        if (next) {
          next.disabled = ranked.has(item.label);
        }
        if (tie) {
          tie.disabled = ranked.has(item.label) || this.groups.length === 0;
        }
      }
      submit.disabled = ranked.size !== items.length;
    };
    refresh();
  }

  // -- pair preference -------------------------------------------------------

  private renderPair(task: TaskPayload): void {
    const items = task.items ?? [];
    this.root.append(
      el("p", "instructions",
        "Which of the two codes looks more similar to the original? " +
        "Click one to choose it."),
    );

    const originalBox = el("section", "original-box");
    originalBox.append(el("h3", undefined, "Original"));
    originalBox.append(codePane(task.original ?? "", "original"));
    this.root.append(originalBox);

    const row = el("div", "pair-row");
    const panes: HTMLElement[] = [];
    const submit = el("button", "primary", "Submit choice");
    submit.dataset.testid = "submit";
    submit.disabled = true;

    for (const item of items) {
      const card = el("div", "pair-card");
      card.dataset.testid = `pair-${item.label}`;
      card.dataset.label = item.label;
      card.append(el("div", "variant-title", item.label));
      const pane = codePane(item.source, `source-${item.label}`);
      panes.push(pane);
      card.append(pane);
      card.addEventListener("click", () => {
        this.chosen = item.label;
        for (const other of Array.from(row.children) as HTMLElement[]) {
          other.dataset.selected = String(other === card);
        }
        submit.disabled = false;
      });
      row.append(card);
    }
    this.root.append(row);
    syncScroll(panes);

    submit.addEventListener("click", () => {
      if (this.chosen !== null) {
        void this.submit(task, { chosen: this.chosen });
      }
    });
    const controls = el("div", "controls");
    controls.append(submit);
    this.root.append(controls);
  }

  // -- think-aloud -------------------------------------------------------------

  private renderThinkAloud(task: TaskPayload): void {
    this.root.append(el("p", "instructions", task.prompt ?? ""));
    const area = el("textarea", "think-aloud");
    area.dataset.testid = "think-aloud-text";
    area.rows = 10;
    const submit = el("button", "primary", "Submit description");
    submit.dataset.testid = "submit";
    submit.disabled = true;
    area.addEventListener("input", () => {
      submit.disabled = area.value.trim().length === 0;
    });
    submit.addEventListener("click", () => {
      void this.submit(task, { text: area.value });
    });
    const controls = el("div", "controls");
    controls.append(submit);
    this.root.append(area, controls);
  }

  // -- submission --------------------------------------------------------------

  private async submit(task: TaskPayload, payload: ResponseBody): Promise<void> {
    if (this.submitting || !task.taskId || !task.kind) {
      return; // guard against rapid double clicks
    }
    this.submitting = true;
    this.setButtonsDisabled(true);
    try {
      const result = await this.api.submitResponse(
        this.sessionId, task.taskId, task.kind as TaskKind, payload);
      if (result.ok) {
        await this.loadNext();
        return;
      }
      if (result.errorType === "DuplicateSubmission") {
        // already recorded server-side; move on to the next task
        await this.loadNext();
        return;
      }
      this.showError(`${result.errorType}: ${result.message}`);
      this.setButtonsDisabled(false);
    } finally {
      this.submitting = false;
    }
  }

  private setButtonsDisabled(disabled: boolean): void {
    for (const button of this.root.querySelectorAll("button")) {
      button.disabled = disabled;
    }
  }

  private showError(message: string): void {
    const line = this.root.querySelector<HTMLElement>('[data-testid="error"]');
    if (line) {
      line.textContent = message;
      line.hidden = false;
    }
  }
}
