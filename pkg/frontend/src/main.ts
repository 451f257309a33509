import { ApiClient } from "./api.js";
import { initApp } from "./app.js";

const root = document.getElementById("app");
if (root !== null) {
  initApp(root, new ApiClient((url, init) => fetch(url, init)));
}
