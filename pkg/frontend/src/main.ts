import { ApiClient } from "./api.js";
import { TriageApp } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
const app = new TriageApp(root, new ApiClient());
void app.loadWorkspace();
