import { ApiClient } from "./api";
import { GridController } from "./grid";
import { Wizard } from "./wizard";
import { WizardView } from "./wizard_view";
import "./style.css";

const app = document.getElementById("app");
if (!app) throw new Error("missing #app");

const api = new ApiClient();

const toolbar = document.createElement("div");
toolbar.className = "toolbar";
const wizardButton = document.createElement("button");
wizardButton.textContent = "pattern wizard";
toolbar.appendChild(wizardButton);

const gridRoot = document.createElement("div");
const wizardRoot = document.createElement("div");
app.append(toolbar, gridRoot, wizardRoot);

const grid = new GridController(gridRoot, api);
void grid.load();

wizardButton.addEventListener("click", () => {
  if (!grid.template) return;
  const wizard = new Wizard(api, grid.template);
  const view = new WizardView(wizardRoot, wizard, () => {
    wizardRoot.textContent = "";
    void grid.load(); // cell statuses may have changed after an expansion
  });
  view.render();
});
