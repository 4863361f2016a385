// DOM layer for the wizard: renders the current step, pushes user input into
// the Wizard state machine, re-renders on every transition.

import { Wizard } from "./wizard";

export class WizardView {
  constructor(
    private root: HTMLElement,
    private wizard: Wizard,
    private onClose: () => void,
  ) {}

  render(): void {
    const wizard = this.wizard;
    this.root.textContent = "";
    const panel = document.createElement("div");
    panel.className = "wizard";
    const title = document.createElement("h2");
    title.textContent = `Pattern wizard: ${wizard.step}`;
    panel.appendChild(title);

    switch (wizard.step) {
      case "selectRows":
        this.renderSelectRows(panel);
        break;
      case "mapVariables":
        this.renderMapVariables(panel);
        break;
      case "review":
        this.renderReview(panel);
        break;
      case "preview":
        this.renderPreview(panel);
        break;
    }

    if (wizard.stepError) {
      const error = document.createElement("p");
      error.className = "step-error";
      error.textContent = wizard.stepError;
      panel.appendChild(error);
    }

    const nav = document.createElement("div");
    nav.className = "wizard-nav";
    const back = document.createElement("button");
    back.textContent = "back";
    back.disabled = wizard.step === "selectRows";
    back.addEventListener("click", () => {
      wizard.back();
      this.render();
    });
    nav.appendChild(back);
    if (wizard.step !== "preview") {
      const next = document.createElement("button");
      next.textContent = wizard.step === "review" ? "generate" : "next";
      next.className = "wizard-next";
      next.addEventListener("click", () => {
        void wizard.next().then(() => this.render());
      });
      nav.appendChild(next);
    }
    const close = document.createElement("button");
    close.textContent = "close";
    close.addEventListener("click", () => this.onClose());
    nav.appendChild(close);
    panel.appendChild(nav);
    this.root.appendChild(panel);
  }

  private renderSelectRows(panel: HTMLElement): void {
    const wizard = this.wizard;
    const pattern = document.createElement("textarea");
    pattern.className = "pattern-text";
    pattern.rows = 10;
    pattern.placeholder = "pattern text (declarations, BEGIN, ADD ..., END;)";
    pattern.value = wizard.patternTexts.join("\n---\n");
    pattern.addEventListener("input", () => {
      wizard.patternTexts = pattern.value
        .split(/^---$/m)
        .map((t) => t.trim())
        .filter((t) => t.length > 0);
    });
    panel.appendChild(pattern);

    const upload = document.createElement("input");
    upload.type = "file";
    upload.multiple = true;
    upload.addEventListener("change", () => {
      const files = Array.from(upload.files ?? []);
      void Promise.all(files.map((f) => f.text())).then((texts) => {
        wizard.patternTexts = texts;
        this.render();
      });
    });
    panel.appendChild(upload);

    const range = document.createElement("div");
    range.className = "row-range";
    const from = document.createElement("input");
    from.type = "number";
    from.value = String(wizard.rowFrom);
    from.addEventListener("input", () => (wizard.rowFrom = Number(from.value)));
    const to = document.createElement("input");
    to.type = "number";
    to.value = String(wizard.rowTo);
    to.addEventListener("input", () => (wizard.rowTo = Number(to.value)));
    range.append("rows ", from, " to ", to, " (0-based)");
    panel.appendChild(range);
  }

  private renderMapVariables(panel: HTMLElement): void {
    const wizard = this.wizard;
    const list = document.createElement("dl");
    for (const variable of wizard.variables()) {
      const dt = document.createElement("dt");
      dt.textContent = `?${variable}`;
      const dd = document.createElement("dd");
      const select = document.createElement("select");
      select.dataset.variable = variable;
      const blank = document.createElement("option");
      blank.value = "";
      blank.textContent = "(pick a column)";
      select.appendChild(blank);
      for (const column of wizard.columns()) {
        const option = document.createElement("option");
        option.value = column;
        option.textContent = column;
        option.selected = wizard.binding[variable] === column;
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        if (select.value) wizard.binding[variable] = select.value;
        else delete wizard.binding[variable];
      });
      dd.appendChild(select);
      list.append(dt, dd);
    }
    panel.appendChild(list);
  }

  private renderReview(panel: HTMLElement): void {
    const wizard = this.wizard;
    if (wizard.violations.length > 0) {
      const list = document.createElement("ul");
      list.className = "violations";
      for (const violation of wizard.violations) {
        const li = document.createElement("li");
        li.textContent = violation;
        list.appendChild(li);
      }
      panel.appendChild(list);
    }
    const mints = wizard.pendingMints();
    if (mints.length > 0) {
      const info = document.createElement("p");
      info.textContent = "these values name no known term and will get new identifiers:";
      panel.appendChild(info);
      const list = document.createElement("ul");
      list.className = "mints";
      for (const mint of mints) {
        const li = document.createElement("li");
        li.textContent = `${mint.label} (row ${mint.row}, ${mint.column})`;
        list.appendChild(li);
      }
      panel.appendChild(list);
      const label = document.createElement("label");
      const confirm = document.createElement("input");
      confirm.type = "checkbox";
      confirm.className = "confirm-mints";
      confirm.checked = wizard.mintsConfirmed;
      confirm.addEventListener("change", () => (wizard.mintsConfirmed = confirm.checked));
      label.append(confirm, " assign new identifiers to these terms");
      panel.appendChild(label);
    } else {
      const ok = document.createElement("p");
      ok.textContent = "every value resolves to a known term; nothing to mint.";
      panel.appendChild(ok);
    }
  }

  private renderPreview(panel: HTMLElement): void {
    const wizard = this.wizard;
    const result = wizard.result;
    if (!result) return;
    const preview = document.createElement("pre");
    preview.className = "manchester-preview";
    preview.textContent = result.manchester;
    panel.appendChild(preview);
    const downloads = document.createElement("div");
    downloads.className = "downloads";
    const buttons: [string, () => void][] = [
      ["download .omn", () => wizard.downloadManchester()],
      ["download .ofn", () => wizard.downloadFunctional()],
      ["download report.csv", () => wizard.downloadReport()],
    ];
    for (const [text, handler] of buttons) {
      const button = document.createElement("button");
      button.textContent = text;
      button.addEventListener("click", handler);
      downloads.appendChild(button);
    }
    panel.appendChild(downloads);
  }
}
